#include "valid/metrics.hpp"

#include <fstream>
#include <ostream>

#include "json.hpp"
#include "valid/errors.hpp"

namespace valid {

using nlohmann::json;

namespace {

json final_object(const RunRecord& r) {
  json j;
  j["final"] = true;
  j["mode"] = r.mode;
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  j["config"] = json::parse(r.config_json);
  j["resolved"] = {{"alpha0", r.alpha0}, {"eta0", r.eta0},   {"gamma", r.gamma},
                   {"gamma_bar", r.gamma_bar}, {"delta", r.delta}, {"epsilon", r.epsilon},
                   {"sigma", r.sigma}, {"xstar", r.xstar}};
  j["outcome"] = r.outcome;
  j["final_mse"] = r.final_mse;
  j["optimality_statistic"] = r.optimality_statistic;
  j["heterogeneity_statistic"] = r.heterogeneity_statistic;
  j["admissible"] = r.admissible ? json(*r.admissible) : json(nullptr);
  j["top_mean_distance"] = r.top_mean_distance ? json(*r.top_mean_distance) : json(nullptr);
  json agents = json::array();
  for (const auto& a : r.agents) {
    agents.push_back({{"id", a.id},
                      {"byzantine", a.byzantine},
                      {"flag", to_string(a.state.flag())},
                      {"cause", to_string(a.state.cause())},
                      {"fired", a.state.fired_string()}});
  }
  j["agents"] = agents;
  return j;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + p.string() + " for writing");
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& p) {
  out.close();
  if (!out) throw Error("write failed: " + p.string());
}

std::string csv_number(double v) { return json(v).dump(); }

}  // namespace

void write_jsonl(std::ostream& out, const RunRecord& record) {
  for (const auto& m : record.rounds) {
    out << json{{"t", m.t}, {"mse", m.mse}, {"dispersion", m.dispersion}, {"grad_norm", m.grad_norm}}.dump()
        << '\n';
  }
  out << final_object(record).dump() << '\n';
}

void write_curve_csv(std::ostream& out, const RunRecord& record) {
  out << "t,mse,dispersion,grad_norm\n";
  for (const auto& m : record.rounds) {
    out << m.t << ',' << csv_number(m.mse) << ',' << csv_number(m.dispersion) << ','
        << csv_number(m.grad_norm) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "config_hash,seed,mode,outcome,final_mse,gamma,sigma,delta,epsilon,"
         "optimality_statistic,heterogeneity_statistic,honest_bot,causes\n";
  for (const auto& r : records) {
    size_t bot = 0;
    std::string causes;
    for (const auto& a : r.agents) {
      if (a.byzantine) continue;
      if (!a.state.top()) ++bot;
      const std::string f = a.state.fired_string();
      if (f != "none" && causes.find(f) == std::string::npos) causes += (causes.empty() ? "" : "|") + f;
    }
    out << r.config_hash << ',' << r.seed << ',' << r.mode << ',' << r.outcome << ','
        << csv_number(r.final_mse) << ',' << csv_number(r.gamma) << ',' << csv_number(r.sigma) << ','
        << csv_number(r.delta) << ',' << csv_number(r.epsilon) << ','
        << csv_number(r.optimality_statistic) << ',' << csv_number(r.heterogeneity_statistic) << ','
        << bot << ',' << (causes.empty() ? "none" : causes) << '\n';
  }
}

std::string final_summary_json(const RunRecord& record) { return final_object(record).dump(); }

std::vector<std::filesystem::path> emit_metrics(const RunRecord& record,
                                                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
  const std::string tag = std::to_string(record.seed);
  const std::vector<std::filesystem::path> paths = {dir / ("run_" + tag + ".jsonl"),
                                                    dir / ("curve_" + tag + ".csv"),
                                                    dir / ("summary_" + tag + ".csv")};
  {
    auto out = open_out(paths[0]);
    write_jsonl(out, record);
    close_out(out, paths[0]);
  }
  {
    auto out = open_out(paths[1]);
    write_curve_csv(out, record);
    close_out(out, paths[1]);
  }
  {
    auto out = open_out(paths[2]);
    write_summary_csv(out, {record});
    close_out(out, paths[2]);
  }
  return paths;
}

}  // namespace valid
