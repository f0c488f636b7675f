#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "limitlab/lab.hpp"
#include "limitlab/specparse.hpp"

// Analysis configuration: a UTF-8 key-value tree. Lines are `key = value` or
// nested sections `key { ... }`; nesting joins keys with dots, and dotted keys
// are accepted directly. '#' starts a comment. Unknown keys are hard parse
// errors — there are no silent defaults for misspellings.

namespace limitlab {

struct Diagnostic {
  int line = 0;  // 1-based; 0 when the error is not tied to a line
  int col = 0;
  std::string message;
};

enum class Command { Analyze, Extract, Lab, Validate };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Extract: return "extract";
    case Command::Lab: return "lab";
    case Command::Validate: return "validate";
  }
  return "?";
}

struct LabCapacityConfig {
  enum class Kind { Uniform, Additive, Values, Power };
  Kind kind = Kind::Uniform;
  std::vector<double> params;
  double power = 1.0;
  std::string text;
};

struct LabConfig {
  int ground = 0;
  Mask null_mask = 0;
  std::optional<std::vector<double>> weights;
  std::optional<std::vector<double>> vector_x;
  std::optional<LabCapacityConfig> capacity;
  double step = 1e-4;
  std::optional<double> kappa;
  std::optional<int> f0_vertex;  // nullopt -> uniform f0
};

struct AnalysisConfig {
  std::optional<SequenceSpec> sequence;
  std::string sequence_text;
  std::optional<IdealModel> ideal;
  std::string ideal_text;
  Index horizon = 100000;
  double tol = 0.01;        // membership tolerance
  double epsilon = 0.05;    // cluster grid resolution
  double resolution = 0;    // bisection resolution; 0 = auto (B * 2^-20)
  std::uint64_t seed = 0;
  int approximants = 3;     // analyze emits y^k for k = 1..approximants
  std::optional<double> eta;
  bool istar = false;
  std::vector<Command> commands{Command::Analyze};
  std::optional<LabConfig> lab;
};

struct ConfigResult {
  std::optional<AnalysisConfig> config;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty() && config.has_value(); }
};

namespace detail {

struct KvEntry {
  std::string key;
  std::string value;
  int line = 0;
  int value_col = 0;  // 1-based column where the value starts
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
          c == '_' || c == '-' || c == '.'))
      return false;
  return true;
}

inline std::vector<KvEntry> parse_kv_tree(std::string_view text, std::vector<Diagnostic>& diags) {
  std::vector<KvEntry> entries;
  std::vector<std::string> sections;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
    ++line_no;
    std::size_t line_start = pos;
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;

    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line == "}") {
      if (sections.empty())
        diags.push_back({line_no, 1, "unmatched '}'"});
      else
        sections.pop_back();
      continue;
    }
    if (line.back() == '{') {
      std::string_view key = trim(line.substr(0, line.size() - 1));
      if (!valid_key(key)) {
        diags.push_back({line_no, 1, "malformed section header"});
        continue;
      }
      sections.emplace_back(key);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      diags.push_back({line_no, 1, "expected 'key = value', 'key {', or '}'"});
      continue;
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (!valid_key(key)) {
      diags.push_back({line_no, 1, "malformed key"});
      continue;
    }
    if (value.empty()) {
      diags.push_back({line_no, 1, "missing value for key '" + std::string(key) + "'"});
      continue;
    }
    std::string full;
    for (const auto& s : sections) full += s + ".";
    full += std::string(key);

    // column of the value within the raw line (1-based)
    int col = static_cast<int>(value.data() - (text.data() + line_start)) + 1;
    entries.push_back({std::move(full), std::string(value), line_no, col});
  }
  if (!sections.empty()) diags.push_back({line_no, 1, "unclosed '{' section"});
  return entries;
}

inline bool parse_number(std::string_view v, double& out) {
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  return res.ec == std::errc{} && res.ptr == v.data() + v.size();
}

inline bool parse_unsigned(std::string_view v, std::uint64_t& out) {
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  return res.ec == std::errc{} && res.ptr == v.data() + v.size();
}

inline bool parse_int(std::string_view v, int& out) {
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  return res.ec == std::errc{} && res.ptr == v.data() + v.size();
}

inline std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t comma = v.find(',', start);
    std::string_view item = v.substr(start, (comma == std::string_view::npos ? v.size() : comma) - start);
    item = trim(item);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool parse_number_list(std::string_view v, std::vector<double>& out) {
  out.clear();
  for (const auto& item : split_list(v)) {
    double d = 0;
    if (!parse_number(item, d)) return false;
    out.push_back(d);
  }
  return !out.empty();
}

}  // namespace detail

inline ConfigResult parse_config(std::string_view text) {
  ConfigResult result;
  auto& diags = result.diagnostics;
  auto entries = detail::parse_kv_tree(text, diags);

  AnalysisConfig cfg;
  LabConfig lab;
  bool lab_seen = false;

  std::map<std::string, int> seen;
  for (const auto& e : entries) {
    if (++seen[e.key] > 1) {
      diags.push_back({e.line, 1, "duplicate key '" + e.key + "'"});
      continue;
    }
    auto bad = [&](const std::string& msg) { diags.push_back({e.line, e.value_col, msg}); };

    if (e.key == "sequence") {
      try {
        cfg.sequence = parse_sequence(e.value);
        cfg.sequence_text = e.value;
      } catch (const SpecParseError& err) {
        diags.push_back({e.line, e.value_col + static_cast<int>(err.offset), err.what()});
      }
    } else if (e.key == "ideal") {
      try {
        cfg.ideal = parse_ideal(e.value);
        cfg.ideal_text = e.value;
      } catch (const SpecParseError& err) {
        diags.push_back({e.line, e.value_col + static_cast<int>(err.offset), err.what()});
      }
    } else if (e.key == "horizon") {
      std::uint64_t h = 0;
      if (!detail::parse_unsigned(e.value, h))
        bad("horizon must be a nonnegative integer");
      else if (h < 64)
        bad("horizon must be >= 64");
      else
        cfg.horizon = h;
    } else if (e.key == "tol" || e.key == "epsilon" || e.key == "resolution") {
      double d = 0;
      if (!detail::parse_number(e.value, d) || !(d > 0.0 && d < 1.0))
        bad(e.key + " must lie in (0,1)");
      else if (e.key == "tol")
        cfg.tol = d;
      else if (e.key == "epsilon")
        cfg.epsilon = d;
      else
        cfg.resolution = d;
    } else if (e.key == "seed") {
      std::uint64_t s = 0;
      if (!detail::parse_unsigned(e.value, s))
        bad("seed must be a nonnegative integer");
      else
        cfg.seed = s;
    } else if (e.key == "approximants") {
      int k = 0;
      if (!detail::parse_int(e.value, k) || k < 0 || k > 32)
        bad("approximants must be an integer in [0,32]");
      else
        cfg.approximants = k;
    } else if (e.key == "eta") {
      double d = 0;
      if (!detail::parse_number(e.value, d))
        bad("eta must be a number");
      else
        cfg.eta = d;
    } else if (e.key == "istar") {
      if (e.value == "true")
        cfg.istar = true;
      else if (e.value == "false")
        cfg.istar = false;
      else
        bad("istar must be true or false");
    } else if (e.key == "commands") {
      cfg.commands.clear();
      for (const auto& item : detail::split_list(e.value)) {
        if (item == "analyze") cfg.commands.push_back(Command::Analyze);
        else if (item == "extract") cfg.commands.push_back(Command::Extract);
        else if (item == "lab") cfg.commands.push_back(Command::Lab);
        else if (item == "validate") cfg.commands.push_back(Command::Validate);
        else bad("unknown command '" + item + "'");
      }
      if (cfg.commands.empty()) bad("commands list is empty");
    } else if (e.key == "lab.ground") {
      int k = 0;
      if (!detail::parse_int(e.value, k) || k < 2 || k > kMaxGround)
        bad("lab.ground must be an integer in [2,16]");
      else
        lab.ground = k;
      lab_seen = true;
    } else if (e.key == "lab.null") {
      lab_seen = true;
      if (e.value == "none") {
        lab.null_mask = 0;
      } else {
        lab.null_mask = 0;
        for (const auto& item : detail::split_list(e.value)) {
          int i = 0;
          if (!detail::parse_int(item, i) || i < 0 || i >= kMaxGround) {
            bad("lab.null must list atom indices or 'none'");
            break;
          }
          lab.null_mask |= Mask{1} << i;
        }
      }
    } else if (e.key == "lab.weights" || e.key == "lab.vector") {
      lab_seen = true;
      std::vector<double> vals;
      if (!detail::parse_number_list(e.value, vals))
        bad(e.key + " must be a comma-separated number list");
      else if (e.key == "lab.weights")
        lab.weights = std::move(vals);
      else
        lab.vector_x = std::move(vals);
    } else if (e.key == "lab.capacity") {
      lab_seen = true;
      LabCapacityConfig cap;
      cap.text = e.value;
      std::string_view v = e.value;
      if (v == "uniform") {
        cap.kind = LabCapacityConfig::Kind::Uniform;
      } else if (v.starts_with("power:")) {
        cap.kind = LabCapacityConfig::Kind::Power;
        if (!detail::parse_number(v.substr(6), cap.power) || !(cap.power > 0)) {
          bad("lab.capacity power exponent must be a positive number");
          continue;
        }
      } else if (v.starts_with("additive(") && v.ends_with(")")) {
        cap.kind = LabCapacityConfig::Kind::Additive;
        if (!detail::parse_number_list(v.substr(9, v.size() - 10), cap.params)) {
          bad("lab.capacity additive weights must be numbers");
          continue;
        }
      } else if (v.starts_with("values(") && v.ends_with(")")) {
        cap.kind = LabCapacityConfig::Kind::Values;
        if (!detail::parse_number_list(v.substr(7, v.size() - 8), cap.params)) {
          bad("lab.capacity values must be numbers");
          continue;
        }
      } else {
        bad("lab.capacity must be uniform, power:P, additive(...), or values(...)");
        continue;
      }
      lab.capacity = std::move(cap);
    } else if (e.key == "lab.step") {
      lab_seen = true;
      double d = 0;
      if (!detail::parse_number(e.value, d) || !(d > 0.0))
        bad("lab.step must be positive");
      else
        lab.step = d;
    } else if (e.key == "lab.kappa") {
      lab_seen = true;
      double d = 0;
      if (!detail::parse_number(e.value, d) || !(d > 0.0))
        bad("lab.kappa must be positive");
      else
        lab.kappa = d;
    } else if (e.key == "lab.f0") {
      lab_seen = true;
      if (e.value == "uniform") {
        lab.f0_vertex = std::nullopt;
      } else {
        int i = 0;
        if (!detail::parse_int(e.value, i) || i < 0 || i >= kMaxGround)
          bad("lab.f0 must be 'uniform' or a vertex atom index");
        else
          lab.f0_vertex = i;
      }
    } else {
      diags.push_back({e.line, 1, "unknown key '" + e.key + "'"});
    }
  }

  if (lab_seen) {
    if (lab.ground == 0) {
      diags.push_back({0, 0, "lab section requires lab.ground"});
    } else {
      if (lab.null_mask >= (Mask{1} << lab.ground) ||
          lab.null_mask == (Mask{1} << lab.ground) - 1)
        diags.push_back({0, 0, "lab.null must be a proper subset of the ground set"});
      auto check_len = [&](const std::optional<std::vector<double>>& v, const char* what) {
        if (v && static_cast<int>(v->size()) != lab.ground)
          diags.push_back({0, 0, std::string(what) + " must have lab.ground entries"});
      };
      check_len(lab.weights, "lab.weights");
      check_len(lab.vector_x, "lab.vector");
      if (lab.capacity) {
        if (lab.capacity->kind == LabCapacityConfig::Kind::Additive &&
            static_cast<int>(lab.capacity->params.size()) != lab.ground)
          diags.push_back({0, 0, "lab.capacity additive(...) needs one weight per atom"});
        if (lab.capacity->kind == LabCapacityConfig::Kind::Values &&
            lab.capacity->params.size() != (std::size_t{1} << lab.ground))
          diags.push_back({0, 0, "lab.capacity values(...) needs one value per subset (2^k)"});
      }
      if (lab.f0_vertex && (*lab.f0_vertex >= lab.ground ||
                            (lab.null_mask & (Mask{1} << *lab.f0_vertex))))
        diags.push_back({0, 0, "lab.f0 must be a free atom of the ground set"});
    }
    cfg.lab = std::move(lab);
  }

  // Per-command requirements.
  for (Command cmd : cfg.commands) {
    if ((cmd == Command::Analyze || cmd == Command::Extract) &&
        (!cfg.sequence || !cfg.ideal)) {
      diags.push_back({0, 0, std::string(command_name(cmd)) + " requires 'sequence' and 'ideal'"});
      break;
    }
    if (cmd == Command::Lab && !cfg.lab) {
      diags.push_back({0, 0, "lab requires a lab { ... } section"});
      break;
    }
  }

  if (diags.empty()) result.config = std::move(cfg);
  return result;
}

}  // namespace limitlab
