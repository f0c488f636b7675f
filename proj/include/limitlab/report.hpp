#pragma once

#include <string>
#include <utility>

#include "json.hpp"
#include "limitlab/config.hpp"
#include "limitlab/convergence.hpp"
#include "limitlab/lab.hpp"
#include "limitlab/validate.hpp"
#include "limitlab/version.hpp"

// JSON forms of every report. The envelope is fixed:
//   {"kind": ..., "inputs": {...}, "result": {...}, "evidence": [...]}
// Insertion order is preserved so identical inputs serialize byte-identically.

namespace limitlab {

using Json = nlohmann::ordered_json;

inline Json report_envelope(const char* kind, Json inputs, Json result, Json evidence) {
  Json j;
  j["kind"] = kind;
  j["inputs"] = std::move(inputs);
  j["result"] = std::move(result);
  j["evidence"] = std::move(evidence);
  return j;
}

inline Json evidence_json(const MembershipEvidence& ev) {
  Json trace = Json::array();
  for (const auto& [h, s] : ev.trace) trace.push_back(Json{{"horizon", h}, {"score", s}});
  Json j;
  j["verdict"] = verdict_name(ev.verdict);
  j["tolerance"] = ev.tolerance;
  j["trace"] = std::move(trace);
  return j;
}

inline Json estimate_json(const Estimate& e) {
  Json j;
  if (e.point())
    j["value"] = e.value();
  else
    j["value"] = nullptr;
  j["lo"] = e.lo;
  j["hi"] = e.hi;
  j["resolution"] = e.resolution;
  j["undecided_probes"] = e.undecided_probes;
  return j;
}

inline Json analysis_inputs(const AnalysisConfig& cfg) {
  Json j;
  j["sequence"] = cfg.sequence ? Json(cfg.sequence->describe()) : Json(nullptr);
  j["ideal"] = cfg.ideal ? Json(cfg.ideal->name()) : Json(nullptr);
  j["horizon"] = cfg.horizon;
  j["tol"] = cfg.tol;
  j["epsilon"] = cfg.epsilon;
  j["resolution"] = cfg.resolution > 0 ? Json(cfg.resolution) : Json("auto");
  return j;
}

inline Json cluster_report_json(const ClusterReport& rep, Json inputs) {
  Json result;
  result["candidates"] = rep.candidates;
  Json runs = Json::array();
  for (const auto& [a, b] : rep.runs) runs.push_back(Json::array({a, b}));
  result["runs"] = std::move(runs);
  result["undecided"] = rep.undecided_points;
  Json evidence = Json::array();
  for (const auto& [eta, ev] : rep.evidence) {
    Json e = evidence_json(ev);
    e["eta"] = eta;
    evidence.push_back(std::move(e));
  }
  return report_envelope("cluster", std::move(inputs), std::move(result), std::move(evidence));
}

inline Json convergence_report_json(const ConvergenceReport& rep, Json inputs) {
  Json result;
  result["verdict"] = outcome_name(rep.outcome);
  result["eta"] = rep.eta ? Json(*rep.eta) : Json(nullptr);
  result["candidates"] = rep.cluster.candidates;
  Json evidence = Json::array();
  if (rep.exceptional_evidence) {
    Json e = evidence_json(*rep.exceptional_evidence);
    e["role"] = "complement-level-set";
    evidence.push_back(std::move(e));
  }
  return report_envelope("convergence", std::move(inputs), std::move(result), std::move(evidence));
}

inline Json distance_report_json(const DistanceReport& rep, Json inputs) {
  Json result;
  result["limsup"] = estimate_json(rep.limsup);
  result["liminf"] = estimate_json(rep.liminf);
  if (rep.point()) {
    result["eta_plus"] = rep.eta_plus();
    result["eta_minus"] = rep.eta_minus();
    result["eta0"] = rep.eta0();
    result["delta0"] = rep.delta0();
    result["distance"] = rep.distance();
  } else {
    result["distance"] = nullptr;
  }
  return report_envelope("distance", std::move(inputs), std::move(result), Json::array());
}

inline Json approximant_report_json(const ApproximantReport& rep, Json inputs) {
  Json result;
  result["k"] = rep.k;
  result["y"] = rep.y.describe();
  result["achieved"] = rep.achieved;
  result["threshold"] = rep.threshold;
  result["degenerate"] = rep.degenerate;
  result["exceptional_set"] = rep.exceptional_set ? Json(rep.exceptional_set->describe()) : Json(nullptr);
  Json evidence = Json::array();
  if (rep.exceptional_evidence) {
    Json e = evidence_json(*rep.exceptional_evidence);
    e["role"] = "exceptional-set";
    evidence.push_back(std::move(e));
  }
  return report_envelope("approximant", std::move(inputs), std::move(result), std::move(evidence));
}

inline Json istar_report_json(const IstarReport& rep, Json inputs) {
  Json result;
  result["status"] = rep.ok ? "ok" : "failure";
  result["eta"] = rep.eta;
  result["witness"] = rep.witness.describe();
  result["bands_hold"] = rep.bands_hold;
  Json evidence = Json::array();
  {
    Json e = evidence_json(rep.evidence);
    e["role"] = "witness-set";
    evidence.push_back(std::move(e));
  }
  return report_envelope("istar", std::move(inputs), std::move(result), std::move(evidence));
}

inline Json extraction_report_json(const ExtractionReport& rep, Json inputs) {
  Json result;
  result["eta"] = rep.eta;
  result["completed_stages"] = rep.completed_stages;
  result["stalled_stage"] = rep.stalled_stage ? Json(*rep.stalled_stage) : Json(nullptr);
  result["cutoffs"] = rep.cutoffs;
  Json blocks = Json::array();
  for (const auto& b : rep.blocks) {
    Json jb;
    jb["stage"] = b.stage;
    jb["window"] = Json::array({b.begin, b.end});
    jb["members"] = b.members;
    jb["submeasure"] = b.phi;
    jb["max_deviation"] = b.max_deviation;
    blocks.push_back(std::move(jb));
  }
  result["blocks"] = std::move(blocks);
  result["union"] = rep.union_spec ? Json(rep.union_spec->describe()) : Json(nullptr);
  Json evidence = Json::array();
  {
    // phi(B n [0, m_k)) keyed by the cutoff it certifies
    Json growth;
    growth["role"] = "phi-growth";
    Json trace = Json::array();
    for (std::size_t i = 0; i < rep.phi_trace.size(); ++i)
      trace.push_back(Json::array({rep.cutoffs[i + 1], rep.phi_trace[i]}));
    growth["trace"] = std::move(trace);
    evidence.push_back(std::move(growth));
  }
  return report_envelope("extraction", std::move(inputs), std::move(result), std::move(evidence));
}

inline Json capacity_json(const FiniteCapacity& nu) {
  Json j = Json::object();
  for (Mask s = 0; s < (Mask{1} << nu.ground_size()); ++s)
    j[format_index(s)] = nu.at(s);  // subset bitmask -> value
  return j;
}

inline Json functional_json(const FiniteFunctional& f) { return Json(f.weights); }

inline Json validate_report_json(const std::vector<SuiteResult>& suites, std::uint64_t seed) {
  Json inputs;
  inputs["seed"] = seed;
  Json list = Json::array();
  bool all = true;
  for (const auto& s : suites) {
    Json checks = Json::array();
    for (const auto& c : s.checks) {
      Json jc;
      jc["name"] = c.name;
      jc["pass"] = c.pass;
      if (!c.detail.empty()) jc["detail"] = c.detail;
      checks.push_back(std::move(jc));
    }
    Json js;
    js["suite"] = s.name;
    js["pass"] = s.pass;
    js["checks"] = std::move(checks);
    all = all && s.pass;
    list.push_back(std::move(js));
  }
  Json result;
  result["pass"] = all;
  result["suites"] = std::move(list);
  return report_envelope("validate", std::move(inputs), std::move(result), Json::array());
}

inline Json config_echo(const AnalysisConfig& cfg) {
  Json j;
  j["sequence"] = cfg.sequence ? Json(cfg.sequence_text) : Json(nullptr);
  j["ideal"] = cfg.ideal ? Json(cfg.ideal_text) : Json(nullptr);
  j["horizon"] = cfg.horizon;
  j["tol"] = cfg.tol;
  j["epsilon"] = cfg.epsilon;
  j["resolution"] = cfg.resolution > 0 ? Json(cfg.resolution) : Json("auto");
  j["seed"] = cfg.seed;
  j["approximants"] = cfg.approximants;
  j["eta"] = cfg.eta ? Json(*cfg.eta) : Json(nullptr);
  j["istar"] = cfg.istar;
  Json cmds = Json::array();
  for (Command c : cfg.commands) cmds.push_back(command_name(c));
  j["commands"] = std::move(cmds);
  if (cfg.lab) {
    Json jl;
    jl["ground"] = cfg.lab->ground;
    Json nulls = Json::array();
    for (int i = 0; i < cfg.lab->ground; ++i)
      if (cfg.lab->null_mask & (Mask{1} << i)) nulls.push_back(i);
    jl["null"] = std::move(nulls);
    jl["weights"] = cfg.lab->weights ? Json(*cfg.lab->weights) : Json(nullptr);
    jl["vector"] = cfg.lab->vector_x ? Json(*cfg.lab->vector_x) : Json(nullptr);
    jl["capacity"] = cfg.lab->capacity ? Json(cfg.lab->capacity->text) : Json(nullptr);
    jl["step"] = cfg.lab->step;
    jl["kappa"] = cfg.lab->kappa ? Json(*cfg.lab->kappa) : Json(nullptr);
    jl["f0"] = cfg.lab->f0_vertex ? Json(*cfg.lab->f0_vertex) : Json("uniform");
    j["lab"] = std::move(jl);
  } else {
    j["lab"] = nullptr;
  }
  return j;
}

}  // namespace limitlab
