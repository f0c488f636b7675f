#pragma once

#include <chrono>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "limitlab/report.hpp"

// Command dispatch: executes a config's commands in order and assembles the
// run report. Command-level failures are captured in place and never abort
// sibling commands. Reports are deterministic for a given config and version;
// wall clocks are emitted as null unless timings are requested.

namespace limitlab {

struct RunOutput {
  Json document;
  bool ok = true;

  std::string to_string() const { return document.dump(2) + "\n"; }
};

namespace detail {

inline Json run_analyze(const AnalysisConfig& cfg) {
  const SequenceSpec& x = *cfg.sequence;
  const IdealModel& ideal = *cfg.ideal;
  Json reports = Json::array();

  ConvergenceReport conv = is_ideal_convergent(x, ideal, cfg.horizon, cfg.epsilon, cfg.tol);
  reports.push_back(cluster_report_json(conv.cluster, analysis_inputs(cfg)));
  reports.push_back(convergence_report_json(conv, analysis_inputs(cfg)));

  DistanceReport dist =
      distance_to_ideal_convergent(x, ideal, cfg.horizon, cfg.tol, cfg.resolution);
  reports.push_back(distance_report_json(dist, analysis_inputs(cfg)));

  if (dist.point()) {
    for (int k = 1; k <= cfg.approximants; ++k)
      reports.push_back(
          approximant_report_json(approximant(x, ideal, dist, k, cfg.horizon, cfg.tol),
                                  analysis_inputs(cfg)));
  } else {
    Json note;
    note["kind"] = "approximant";
    note["skipped"] = "distance estimates are intervals; approximants need point values";
    reports.push_back(std::move(note));
  }

  if (cfg.istar && conv.outcome == ConvergenceReport::Outcome::Yes) {
    // the bisection midpoint pins eta to ~B*2^-20, far inside the witness
    // schedule's finest band; the cluster midpoint is only eps-accurate
    double eta = dist.point() ? dist.eta0() : *conv.eta;
    reports.push_back(
        istar_report_json(istar_witness(x, ideal, eta, cfg.horizon, cfg.tol),
                          analysis_inputs(cfg)));
  }
  return reports;
}

inline Json run_extract(const AnalysisConfig& cfg) {
  const SequenceSpec& x = *cfg.sequence;
  const IdealModel& ideal = *cfg.ideal;
  if (!ideal.f_sigma())
    throw std::invalid_argument("extract: ideal '" + ideal.name() +
                                "' is not F_sigma (fin or summable kinds only)");
  std::vector<double> etas;
  if (cfg.eta) {
    etas.push_back(*cfg.eta);
  } else {
    ClusterReport cl = cluster_set(x, ideal, cfg.horizon, cfg.epsilon, cfg.tol);
    etas = cl.candidates;
  }
  Json reports = Json::array();
  for (double eta : etas)
    reports.push_back(
        extraction_report_json(extract_limit_point(x, ideal, eta, cfg.horizon),
                               analysis_inputs(cfg)));
  return reports;
}

inline FiniteCapacity lab_capacity(const LabConfig& lab) {
  const LabCapacityConfig& cap = *lab.capacity;
  switch (cap.kind) {
    case LabCapacityConfig::Kind::Uniform: return FiniteCapacity::uniform(lab.ground);
    case LabCapacityConfig::Kind::Additive: return FiniteCapacity::additive(cap.params);
    case LabCapacityConfig::Kind::Values: return FiniteCapacity(lab.ground, cap.params);
    case LabCapacityConfig::Kind::Power:
      return FiniteCapacity::power_distortion(lab.ground, cap.power);
  }
  throw std::logic_error("lab: unreachable capacity kind");
}

inline Json run_lab(const AnalysisConfig& cfg) {
  const LabConfig& lab = *cfg.lab;
  GroundSet g(lab.ground, lab.null_mask);
  Json reports = Json::array();

  Json base;
  base["ground"] = lab.ground;
  base["null_mask"] = lab.null_mask;

  {
    auto verts = sl_vertices(g);
    Json vj = Json::array();
    for (const auto& v : verts) vj.push_back(functional_json(v));
    Json result;
    result["vertices"] = std::move(vj);
    result["count"] = verts.size();
    reports.push_back(report_envelope("lab.vertices", base, std::move(result), Json::array()));
  }
  {
    Json result;
    result["diameter"] = sl_diameter(g);
    reports.push_back(report_envelope("lab.diameter", base, std::move(result), Json::array()));
  }

  if (lab.weights) {
    FiniteFunctional f{*lab.weights};
    Json inputs = base;
    inputs["weights"] = functional_json(f);
    {
      Json result;
      result["member"] = sl_membership(f, g);
      reports.push_back(report_envelope("lab.sl-membership", inputs, std::move(result), Json::array()));
    }
    if (std::abs(f.at_unit()) <= kAlgebraTol) {
      auto rep = norm_identity_check(f);
      Json result;
      result["lhs"] = rep.lhs;
      result["rhs"] = rep.rhs;
      result["pass"] = rep.pass;
      reports.push_back(report_envelope("lab.norm-identity", inputs, std::move(result), Json::array()));
    }
    {
      DifferenceConditions c = difference_conditions(f, g);
      Json result;
      result["sum_zero"] = c.sum_zero;
      result["norm_at_most_two"] = c.norm_at_most_two;
      result["null_vanishing"] = c.null_vanishing;
      if (c.all()) {
        std::optional<FiniteFunctional> f0;
        if (lab.f0_vertex) f0 = FiniteFunctional::vertex(g.size, *lab.f0_vertex);
        auto d = decompose_difference(f, g, f0);
        result["g"] = functional_json(d.g);
        result["h"] = functional_json(d.h);
        auto probe = decomposition_uniqueness_probe(f, g);
        result["unique"] = probe.unique;
        if (probe.witnesses) {
          result["witness_g1"] = functional_json(probe.witnesses->first.g);
          result["witness_g2"] = functional_json(probe.witnesses->second.g);
        }
        if (lab.kappa) {
          auto sd = scaled_decomposition(f, g, *lab.kappa);
          Json scaled;
          scaled["kappa"] = *lab.kappa;
          scaled["g"] = functional_json(sd.g);
          scaled["h"] = functional_json(sd.h);
          result["scaled"] = std::move(scaled);
        }
      } else {
        result["violation"] = c.failed();
      }
      reports.push_back(report_envelope("lab.decompose", inputs, std::move(result), Json::array()));
    }
  }

  if (lab.vector_x) {
    Json inputs = base;
    inputs["vector"] = Json(*lab.vector_x);
    {
      Json result;
      auto range = value_range(*lab.vector_x, g);
      result["lo"] = range.lo;
      result["hi"] = range.hi;
      reports.push_back(report_envelope("lab.value-range", inputs, std::move(result), Json::array()));
    }
    if (lab.capacity) {
      FiniteCapacity nu = lab_capacity(lab);
      inputs["capacity"] = capacity_json(nu);
      inputs["step"] = lab.step;
      double exact = choquet(*lab.vector_x, nu);
      double riemann = choquet_riemann(*lab.vector_x, nu, lab.step);
      Json result;
      result["choquet"] = exact;
      result["riemann"] = riemann;
      result["difference"] = std::abs(exact - riemann);
      reports.push_back(report_envelope("lab.choquet", std::move(inputs), std::move(result), Json::array()));
    }
    if (lab.weights) {
      FiniteFunctional f{*lab.weights};
      if (sl_membership(f, g)) {
        auto rep = representation_check(f, *lab.vector_x, g);
        Json inputs2 = base;
        inputs2["weights"] = functional_json(f);
        inputs2["vector"] = Json(*lab.vector_x);
        Json result;
        result["direct"] = rep.direct;
        result["choquet_avg"] = rep.choquet_avg;
        result["pass"] = rep.pass;
        reports.push_back(
            report_envelope("lab.representation", std::move(inputs2), std::move(result), Json::array()));
      }
    }
  }

  return reports;
}

}  // namespace detail

inline RunOutput run(const AnalysisConfig& cfg, bool with_timings = false) {
  RunOutput out;
  out.document["version"] = kVersion;
  out.document["schema"] = kReportSchema;
  out.document["config"] = config_echo(cfg);

  Json commands = Json::array();
  for (Command cmd : cfg.commands) {
    Json entry;
    entry["name"] = command_name(cmd);
    auto started = std::chrono::steady_clock::now();
    try {
      switch (cmd) {
        case Command::Analyze:
          entry["reports"] = detail::run_analyze(cfg);
          entry["status"] = "ok";
          break;
        case Command::Extract:
          entry["reports"] = detail::run_extract(cfg);
          entry["status"] = "ok";
          break;
        case Command::Lab:
          entry["reports"] = detail::run_lab(cfg);
          entry["status"] = "ok";
          break;
        case Command::Validate: {
          auto suites = run_validation_suites(cfg.seed);
          bool pass = true;
          for (const auto& s : suites) pass = pass && s.pass;
          entry["reports"] = Json::array({validate_report_json(suites, cfg.seed)});
          entry["status"] = pass ? "ok" : "failed";
          if (!pass) {
            entry["error"] = "one or more oracle suites failed";
            out.ok = false;
          }
          break;
        }
      }
    } catch (const std::exception& e) {
      entry["status"] = "error";
      entry["error"] = e.what();
      out.ok = false;
    }
    if (with_timings) {
      auto elapsed = std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - started);
      entry["wall_clock_ms"] = elapsed.count();
    } else {
      entry["wall_clock_ms"] = nullptr;
    }
    commands.push_back(std::move(entry));
  }
  out.document["commands"] = std::move(commands);
  out.document["ok"] = out.ok;
  return out;
}

// CSV emission covers score traces only: one row per (horizon, score) pair of
// every piece of membership evidence in the run.
inline std::string csv_score_traces(const Json& document) {
  std::string csv = "command,kind,context,verdict,horizon,score\n";
  if (!document.contains("commands")) return csv;
  for (const auto& cmd : document["commands"]) {
    if (!cmd.contains("reports")) continue;
    for (const auto& rep : cmd["reports"]) {
      if (!rep.contains("evidence")) continue;
      std::string kind = rep.value("kind", "");
      for (const auto& ev : rep["evidence"]) {
        if (!ev.contains("trace")) continue;
        std::string context;
        if (ev.contains("eta")) context = format_double(ev["eta"].get<double>());
        else if (ev.contains("role")) context = ev["role"].get<std::string>();
        std::string verdict = ev.value("verdict", "");
        for (const auto& row : ev["trace"]) {
          csv += cmd["name"].get<std::string>();
          csv += ',';
          csv += kind;
          csv += ',';
          csv += context;
          csv += ',';
          csv += verdict;
          csv += ',';
          if (row.is_array()) {
            csv += format_index(row[0].get<Index>());
            csv += ',';
            csv += format_double(row[1].get<double>());
          } else {
            csv += format_index(row["horizon"].get<Index>());
            csv += ',';
            csv += format_double(row["score"].get<double>());
          }
          csv += '\n';
        }
      }
    }
  }
  return csv;
}

}  // namespace limitlab
