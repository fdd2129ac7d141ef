#include "samo/runio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace samo::runio {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

json matrix_to_json(const Mat& m) {
  json out = json::array();
  for (const Vec& row : m) out.push_back(row);
  return out;
}

Mat matrix_from_json(const json& j) {
  Mat out;
  for (const json& row : j) out.push_back(row.get<Vec>());
  return out;
}

}  // namespace

json record_to_json(const RunRecord& record, bool include_timing) {
  json j;
  j["schema_version"] = 1;
  j["problem"] = record.problem;
  j["objectives"] = record.num_objectives;
  j["variables"] = record.num_variables;
  j["mode"] = record.mode;
  j["seed"] = record.seed;
  if (include_timing) j["total_wall_seconds"] = record.total_wall_seconds;
  json iters = json::array();
  for (const IterationRecord& it : record.iterations) {
    json ji;
    ji["iteration"] = it.iteration;
    ji["n"] = it.n;
    ji["hv"] = it.hv;
    if (std::isnan(it.igd_plus)) {
      ji["igd_plus"] = nullptr;
    } else {
      ji["igd_plus"] = it.igd_plus;
    }
    if (include_timing) ji["wall_seconds"] = it.wall_seconds;
    ji["ref_source"] = it.ref_source;
    ji["nadir"] = it.nadir;
    ji["utopia"] = it.utopia;
    ji["nds_x"] = matrix_to_json(it.nds_x);
    ji["nds_f"] = matrix_to_json(it.nds_f);
    if (!it.models.empty()) {
      json models = json::array();
      for (const KrigingDiag& d : it.models) {
        models.push_back({{"theta", d.theta},
                          {"mu_hat", d.mu_hat},
                          {"sigma2_hat", d.sigma2_hat},
                          {"nugget", d.nugget},
                          {"constant", d.constant}});
      }
      ji["models"] = std::move(models);
    }
    iters.push_back(std::move(ji));
  }
  j["iterations"] = std::move(iters);
  return j;
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.problem = j.at("problem").get<std::string>();
  r.num_objectives = j.at("objectives").get<int>();
  r.num_variables = j.at("variables").get<int>();
  r.mode = j.at("mode").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.total_wall_seconds = j.value("total_wall_seconds", 0.0);
  for (const json& ji : j.at("iterations")) {
    IterationRecord it;
    it.iteration = ji.at("iteration").get<int>();
    it.n = ji.at("n").get<int>();
    it.hv = ji.at("hv").get<double>();
    it.igd_plus = ji.at("igd_plus").is_null()
                      ? std::numeric_limits<double>::quiet_NaN()
                      : ji.at("igd_plus").get<double>();
    it.wall_seconds = ji.value("wall_seconds", 0.0);
    it.ref_source = ji.at("ref_source").get<std::string>();
    it.nadir = ji.value("nadir", Vec{});
    it.utopia = ji.value("utopia", Vec{});
    it.nds_x = matrix_from_json(ji.at("nds_x"));
    it.nds_f = matrix_from_json(ji.at("nds_f"));
    if (ji.contains("models")) {
      for (const json& jm : ji.at("models")) {
        KrigingDiag d;
        d.theta = jm.at("theta").get<Vec>();
        d.mu_hat = jm.at("mu_hat").get<double>();
        d.sigma2_hat = jm.at("sigma2_hat").get<double>();
        d.nugget = jm.at("nugget").get<double>();
        d.constant = jm.at("constant").get<bool>();
        it.models.push_back(std::move(d));
      }
    }
    r.iterations.push_back(std::move(it));
  }
  return r;
}

void write_record(const std::string& path, const RunRecord& record) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << record_to_json(record).dump(1) << '\n';
}

RunRecord read_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return record_from_json(json::parse(in));
}

void write_metrics_csv(const std::string& path, const RunRecord& record) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iteration,n,hv,igd_plus,wall_seconds\n";
  for (const IterationRecord& it : record.iterations) {
    out << it.iteration << ',' << it.n << ',' << format_double(it.hv) << ','
        << (std::isnan(it.igd_plus) ? std::string("nan")
                                    : format_double(it.igd_plus))
        << ',' << format_double(it.wall_seconds) << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Mat& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const Vec& row : points) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out << ',';
      out << format_double(row[k]);
    }
    out << '\n';
  }
}

Mat read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Mat out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Vec row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace samo::runio
