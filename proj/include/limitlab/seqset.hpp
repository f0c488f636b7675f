#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Finitely described subsets of omega and bounded real sequences. Values are
// immutable rule trees evaluated lazily on index windows; nothing is ever
// materialized beyond the window being asked for, which keeps horizons up to
// 1e7 workable.

namespace limitlab {

using Index = std::uint64_t;

class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

enum class Cmp { Ge, Gt, Le, Lt };

inline const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::Ge: return "ge";
    case Cmp::Gt: return "gt";
    case Cmp::Le: return "le";
    case Cmp::Lt: return "lt";
  }
  return "?";
}

inline bool cmp_apply(Cmp c, double value, double threshold) {
  switch (c) {
    case Cmp::Ge: return value >= threshold;
    case Cmp::Gt: return value > threshold;
    case Cmp::Le: return value <= threshold;
    case Cmp::Lt: return value < threshold;
  }
  return false;
}

// Shortest decimal that round-trips the double (to_chars default).
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_index(Index v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class SetSpec;
class SequenceSpec;

namespace detail {

struct SetNode;
struct SeqNode;
using SetPtr = std::shared_ptr<const SetNode>;
using SeqPtr = std::shared_ptr<const SeqNode>;

struct ExplicitFinite {
  std::vector<Index> elems;  // strictly increasing
};
struct Arithmetic {
  Index first;
  Index step;  // >= 1
};
struct Squares {};
struct Blocks {
  // k -> [a_k, b_k); a_k strictly increasing, b_k <= a_{k+1}. The obligation
  // is checked lazily on every pair of blocks the evaluator touches.
  std::function<std::pair<Index, Index>(Index)> rule;
  std::string label;
};
struct ComplementOf {
  SetPtr inner;
};
struct UnionOf {
  SetPtr lhs, rhs;
};
struct IntersectionOf {
  SetPtr lhs, rhs;
};
struct LevelSet {
  SeqPtr seq;
  Cmp cmp;
  double threshold;
};

struct Constant {
  double value;
};
struct Indicator {
  SetPtr set;
};
struct Periodic {
  std::vector<double> values;  // nonempty
};
struct Harmonic {
  double scale;  // x_n = scale / (n + 1)
};
struct AlternatingDecay {};  // x_n = (-1)^n (1 + 1/(n+1))
struct SumOf {
  SeqPtr lhs, rhs;
};
struct ScaleOf {
  double factor;
  SeqPtr inner;
};
struct PiecewiseSeq {
  SetPtr where;
  SeqPtr on_rule, off_rule;
};

using SetRule = std::variant<ExplicitFinite, Arithmetic, Squares, Blocks, ComplementOf,
                             UnionOf, IntersectionOf, LevelSet>;
using SeqRule = std::variant<Constant, Indicator, Periodic, Harmonic, AlternatingDecay,
                             SumOf, ScaleOf, PiecewiseSeq>;

struct SetNode {
  SetRule rule;
  std::string text;  // canonical expression
  bool sparse;       // window enumeration costs O(members), not O(window)
};

struct SeqNode {
  SeqRule rule;
  double bound;  // declared sup bound, |x_n| <= bound
  std::string text;
};

inline bool set_member(const SetNode& s, Index n);
inline double seq_eval(const SeqNode& x, Index n);

inline Index isqrt_floor(Index n) {
  if (n == 0) return 0;
  Index r = static_cast<Index>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::pair<Index, Index> block_at(const Blocks& b, Index k) {
  auto [a, e] = b.rule(k);
  if (e < a) throw SpecError("blocks '" + b.label + "': block " + format_index(k) + " has b_k < a_k");
  return {a, e};
}

// a_k strictly increasing and b_k <= a_{k+1}; checked on the pair actually used.
inline void check_block_pair(const Blocks& b, Index k) {
  auto [a0, e0] = block_at(b, k);
  auto [a1, e1] = block_at(b, k + 1);
  (void)e1;
  if (a1 <= a0) throw SpecError("blocks '" + b.label + "': a_k not strictly increasing at k=" + format_index(k));
  if (e0 > a1) throw SpecError("blocks '" + b.label + "': b_k > a_{k+1} at k=" + format_index(k));
}

// Largest k with a_k <= n, or nullopt when a_0 > n. Galloping search; valid
// because a_k is strictly increasing, which the gallop itself verifies along
// the doubling ladder (part of the lazy proof obligation).
inline std::optional<Index> locate_block(const Blocks& b, Index n) {
  Index prev_a = block_at(b, 0).first;
  if (prev_a > n) return std::nullopt;
  Index lo = 0, hi = 1;
  while (true) {
    Index a_hi = block_at(b, hi).first;
    if (a_hi <= prev_a)
      throw SpecError("blocks '" + b.label + "': a_k not strictly increasing between k=" +
                      format_index(lo) + " and k=" + format_index(hi));
    if (a_hi > n) break;
    prev_a = a_hi;
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    Index mid = lo + (hi - lo) / 2;
    (block_at(b, mid).first <= n ? lo : hi) = mid;
  }
  check_block_pair(b, lo);
  if (lo > 0) check_block_pair(b, lo - 1);
  return lo;
}

inline bool set_member(const SetNode& s, Index n) {
  return std::visit(
      [n](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExplicitFinite>) {
          return std::binary_search(r.elems.begin(), r.elems.end(), n);
        } else if constexpr (std::is_same_v<T, Arithmetic>) {
          return n >= r.first && (n - r.first) % r.step == 0;
        } else if constexpr (std::is_same_v<T, Squares>) {
          Index q = isqrt_floor(n);
          return q * q == n;
        } else if constexpr (std::is_same_v<T, Blocks>) {
          auto k = locate_block(r, n);
          return k && n < block_at(r, *k).second;
        } else if constexpr (std::is_same_v<T, ComplementOf>) {
          return !set_member(*r.inner, n);
        } else if constexpr (std::is_same_v<T, UnionOf>) {
          return set_member(*r.lhs, n) || set_member(*r.rhs, n);
        } else if constexpr (std::is_same_v<T, IntersectionOf>) {
          return set_member(*r.lhs, n) && set_member(*r.rhs, n);
        } else {  // LevelSet
          return cmp_apply(r.cmp, seq_eval(*r.seq, n), r.threshold);
        }
      },
      s.rule);
}

inline void enumerate_into(const SetNode& s, Index m, Index n, std::vector<Index>& out);

inline void enumerate_dense(const SetNode& s, Index m, Index n, std::vector<Index>& out) {
  for (Index i = m; i < n; ++i)
    if (set_member(s, i)) out.push_back(i);
}

inline void enumerate_into(const SetNode& s, Index m, Index n, std::vector<Index>& out) {
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExplicitFinite>) {
          auto lo = std::lower_bound(r.elems.begin(), r.elems.end(), m);
          auto hi = std::lower_bound(lo, r.elems.end(), n);
          out.insert(out.end(), lo, hi);
        } else if constexpr (std::is_same_v<T, Arithmetic>) {
          Index start = r.first;
          if (start < m) start = r.first + ((m - r.first + r.step - 1) / r.step) * r.step;
          for (Index i = start; i < n; i += r.step) out.push_back(i);
        } else if constexpr (std::is_same_v<T, Squares>) {
          Index q = (m == 0) ? 0 : isqrt_floor(m - 1) + 1;  // smallest q with q^2 >= m
          for (; q * q < n; ++q) out.push_back(q * q);
        } else if constexpr (std::is_same_v<T, Blocks>) {
          if (m >= n) return;
          auto loc = locate_block(r, m);
          Index k = loc ? *loc : 0;
          for (;; ++k) {
            auto [a, e] = block_at(r, k);
            if (a >= n) break;
            check_block_pair(r, k);
            for (Index i = std::max(a, m); i < std::min(e, n); ++i) out.push_back(i);
          }
        } else if constexpr (std::is_same_v<T, UnionOf>) {
          if (r.lhs->sparse && r.rhs->sparse) {
            std::vector<Index> a, b;
            enumerate_into(*r.lhs, m, n, a);
            enumerate_into(*r.rhs, m, n, b);
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
          } else {
            enumerate_dense(s, m, n, out);
          }
        } else if constexpr (std::is_same_v<T, IntersectionOf>) {
          // One sparse side is enough: enumerate it and filter by the other.
          if (r.lhs->sparse) {
            std::vector<Index> a;
            enumerate_into(*r.lhs, m, n, a);
            for (Index i : a)
              if (set_member(*r.rhs, i)) out.push_back(i);
          } else if (r.rhs->sparse) {
            std::vector<Index> b;
            enumerate_into(*r.rhs, m, n, b);
            for (Index i : b)
              if (set_member(*r.lhs, i)) out.push_back(i);
          } else {
            enumerate_dense(s, m, n, out);
          }
        } else {
          enumerate_dense(s, m, n, out);
        }
      },
      s.rule);
}

inline double seq_eval(const SeqNode& x, Index n) {
  return std::visit(
      [n](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return r.value;
        } else if constexpr (std::is_same_v<T, Indicator>) {
          return set_member(*r.set, n) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, Periodic>) {
          return r.values[n % r.values.size()];
        } else if constexpr (std::is_same_v<T, Harmonic>) {
          return r.scale / static_cast<double>(n + 1);
        } else if constexpr (std::is_same_v<T, AlternatingDecay>) {
          double v = 1.0 + 1.0 / static_cast<double>(n + 1);
          return (n % 2 == 0) ? v : -v;
        } else if constexpr (std::is_same_v<T, SumOf>) {
          return seq_eval(*r.lhs, n) + seq_eval(*r.rhs, n);
        } else if constexpr (std::is_same_v<T, ScaleOf>) {
          return r.factor * seq_eval(*r.inner, n);
        } else {  // PiecewiseSeq
          return set_member(*r.where, n) ? seq_eval(*r.on_rule, n) : seq_eval(*r.off_rule, n);
        }
      },
      x.rule);
}

inline constexpr Index kBoundAuditWindow = 10000;

inline void audit_bound(const SeqNode& node) {
  const double slack = 1e-12 * (1.0 + std::abs(node.bound));
  for (Index n = 0; n < kBoundAuditWindow; ++n) {
    double v = seq_eval(node, n);
    if (!std::isfinite(v) || std::abs(v) > node.bound + slack)
      throw SpecError("sequence '" + node.text + "': declared bound " + format_double(node.bound) +
                      " violated at n=" + format_index(n) + " (value " + format_double(v) + ")");
  }
}

}  // namespace detail

// A finitely described subset of omega.
class SetSpec {
 public:
  static SetSpec explicit_finite(std::vector<Index> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    std::string text;
    if (elems.empty()) {
      text = "empty";
    } else {
      text = "explicit(";
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i) text += ',';
        text += format_index(elems[i]);
      }
      text += ')';
    }
    return make(detail::ExplicitFinite{std::move(elems)}, std::move(text), true);
  }

  static SetSpec arithmetic(Index first, Index step) {
    if (step < 1) throw SpecError("arithmetic: step must be >= 1");
    return make(detail::Arithmetic{first, step},
                "arithmetic:" + format_index(first) + ":" + format_index(step), true);
  }

  static SetSpec evens() { return arithmetic(0, 2); }
  static SetSpec odds() { return arithmetic(1, 2); }
  static SetSpec squares() { return make(detail::Squares{}, "squares", true); }

  static SetSpec blocks(std::function<std::pair<Index, Index>(Index)> rule, std::string label) {
    detail::Blocks b{std::move(rule), label};
    for (Index k = 0; k < 8; ++k) detail::check_block_pair(b, k);
    return make(std::move(b), "blocks:" + label, true);
  }

  // [lo, hi) as a single-block Blocks rule (later blocks empty).
  static SetSpec interval(Index lo, Index hi) {
    if (hi < lo) throw SpecError("interval: hi < lo");
    auto rule = [lo, hi](Index k) -> std::pair<Index, Index> {
      if (k == 0) return {lo, hi};
      Index a = std::max(hi, lo + 1) + (k - 1);
      return {a, a};
    };
    SetSpec s = make(detail::Blocks{rule, ""}, "interval:" + format_index(lo) + ":" + format_index(hi), true);
    return s;
  }

  static SetSpec complement(SetSpec inner) {
    std::string text = "complement(" + inner.describe() + ")";
    return make(detail::ComplementOf{inner.node_}, std::move(text), false);
  }

  static SetSpec set_union(SetSpec lhs, SetSpec rhs) {
    bool sparse = lhs.node_->sparse && rhs.node_->sparse;
    std::string text = "union(" + lhs.describe() + "," + rhs.describe() + ")";
    return make(detail::UnionOf{lhs.node_, rhs.node_}, std::move(text), sparse);
  }

  static SetSpec set_intersection(SetSpec lhs, SetSpec rhs) {
    bool sparse = lhs.node_->sparse || rhs.node_->sparse;
    std::string text = "intersection(" + lhs.describe() + "," + rhs.describe() + ")";
    return make(detail::IntersectionOf{lhs.node_, rhs.node_}, std::move(text), sparse);
  }

  static SetSpec level_set(const SequenceSpec& x, Cmp cmp, double threshold);

  bool contains(Index n) const { return detail::set_member(*node_, n); }

  std::vector<Index> window(Index m, Index n) const {
    if (m > n) throw std::invalid_argument("enumerate_window: m > n");
    std::vector<Index> out;
    detail::enumerate_into(*node_, m, n, out);
    return out;
  }

  const std::string& describe() const { return node_->text; }
  bool sparse() const { return node_->sparse; }
  const detail::SetPtr& node() const { return node_; }

 private:
  explicit SetSpec(detail::SetPtr node) : node_(std::move(node)) {}
  static SetSpec make(detail::SetRule rule, std::string text, bool sparse) {
    return SetSpec(std::make_shared<detail::SetNode>(
        detail::SetNode{std::move(rule), std::move(text), sparse}));
  }
  detail::SetPtr node_;
};

// A bounded real sequence given by a rule plus a declared sup bound.
class SequenceSpec {
 public:
  static SequenceSpec constant(double c) {
    require_finite(c, "constant");
    return make(detail::Constant{c}, std::abs(c), "constant:" + format_double(c));
  }

  static SequenceSpec indicator(SetSpec s) {
    std::string text = "indicator(" + s.describe() + ")";
    return make(detail::Indicator{s.node()}, 1.0, std::move(text));
  }

  static SequenceSpec periodic(std::vector<double> values) {
    if (values.empty()) throw SpecError("periodic: empty value list");
    double b = 0;
    std::string text = "periodic(";
    for (std::size_t i = 0; i < values.size(); ++i) {
      require_finite(values[i], "periodic");
      b = std::max(b, std::abs(values[i]));
      if (i) text += ',';
      text += format_double(values[i]);
    }
    text += ')';
    return make(detail::Periodic{std::move(values)}, b, std::move(text));
  }

  static SequenceSpec harmonic(double scale) {
    require_finite(scale, "harmonic");
    return make(detail::Harmonic{scale}, std::abs(scale), "harmonic:" + format_double(scale));
  }

  static SequenceSpec alternating_decay() {
    return make(detail::AlternatingDecay{}, 2.0, "alternating-decay");
  }

  // Sum and Scale audit their declared bound on a 1e4-point window; an
  // inconsistent declaration is a construction error.
  static SequenceSpec sum(SequenceSpec a, SequenceSpec b) {
    return sum(std::move(a), std::move(b), 0, false);
  }
  static SequenceSpec sum(SequenceSpec a, SequenceSpec b, double declared_bound) {
    return sum(std::move(a), std::move(b), declared_bound, true);
  }

  static SequenceSpec scale(double factor, SequenceSpec x) {
    return scale(factor, std::move(x), 0, false);
  }
  static SequenceSpec scale(double factor, SequenceSpec x, double declared_bound) {
    return scale(factor, std::move(x), declared_bound, true);
  }

  static SequenceSpec piecewise(SetSpec where, SequenceSpec on_rule, SequenceSpec off_rule) {
    double b = std::max(on_rule.bound(), off_rule.bound());
    std::string text = "piecewise(" + where.describe() + "," + on_rule.describe() + "," +
                       off_rule.describe() + ")";
    return make(detail::PiecewiseSeq{where.node(), on_rule.node_, off_rule.node_}, b,
                std::move(text));
  }

  // Re-declare the bound of an existing spec; audited like Sum/Scale.
  static SequenceSpec bounded(SequenceSpec x, double declared_bound) {
    require_finite(declared_bound, "bounded");
    if (declared_bound < 0) throw SpecError("bounded: negative bound");
    std::string text = "bounded(" + x.describe() + "," + format_double(declared_bound) + ")";
    auto node = std::make_shared<detail::SeqNode>(
        detail::SeqNode{x.node_->rule, declared_bound, std::move(text)});
    detail::audit_bound(*node);
    return SequenceSpec(std::move(node));
  }

  double at(Index n) const { return detail::seq_eval(*node_, n); }
  double bound() const { return node_->bound; }
  const std::string& describe() const { return node_->text; }
  const detail::SeqPtr& node() const { return node_; }

 private:
  explicit SequenceSpec(detail::SeqPtr node) : node_(std::move(node)) {}

  static void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw SpecError(std::string(what) + ": non-finite value");
  }

  static SequenceSpec make(detail::SeqRule rule, double bound, std::string text) {
    return SequenceSpec(std::make_shared<detail::SeqNode>(
        detail::SeqNode{std::move(rule), bound, std::move(text)}));
  }

  static SequenceSpec sum(SequenceSpec a, SequenceSpec b, double declared, bool has_declared) {
    double bound = has_declared ? declared : a.bound() + b.bound();
    std::string text = "sum(" + a.describe() + "," + b.describe() + ")";
    if (has_declared) text = "bounded(" + text + "," + format_double(declared) + ")";
    auto node = std::make_shared<detail::SeqNode>(
        detail::SeqNode{detail::SumOf{a.node_, b.node_}, bound, std::move(text)});
    detail::audit_bound(*node);
    return SequenceSpec(std::move(node));
  }

  static SequenceSpec scale(double factor, SequenceSpec x, double declared, bool has_declared) {
    require_finite(factor, "scale");
    double bound = has_declared ? declared : std::abs(factor) * x.bound();
    std::string text = "scale(" + format_double(factor) + "," + x.describe() + ")";
    if (has_declared) text = "bounded(" + text + "," + format_double(declared) + ")";
    auto node = std::make_shared<detail::SeqNode>(
        detail::SeqNode{detail::ScaleOf{factor, x.node_}, bound, std::move(text)});
    detail::audit_bound(*node);
    return SequenceSpec(std::move(node));
  }

  detail::SeqPtr node_;
};

inline SetSpec SetSpec::level_set(const SequenceSpec& x, Cmp cmp, double threshold) {
  if (!std::isfinite(threshold)) throw SpecError("levelset: non-finite threshold");
  std::string text = "levelset(" + x.describe() + "," + cmp_name(cmp) + "," +
                     format_double(threshold) + ")";
  return make(detail::LevelSet{x.node(), cmp, threshold}, std::move(text), false);
}

// Spec-facing operation names.
inline bool member(const SetSpec& s, Index n) { return s.contains(n); }
inline std::vector<Index> enumerate_window(const SetSpec& s, Index m, Index n) {
  return s.window(m, n);
}
inline double eval_seq(const SequenceSpec& x, Index n) { return x.at(n); }

// {n : |x_n - eta| <= eps}
inline SetSpec band_closed(const SequenceSpec& x, double eta, double eps) {
  return SetSpec::set_intersection(SetSpec::level_set(x, Cmp::Le, eta + eps),
                                   SetSpec::level_set(x, Cmp::Ge, eta - eps));
}

// {n : |x_n - eta| < eps}
inline SetSpec band_open(const SequenceSpec& x, double eta, double eps) {
  return SetSpec::set_intersection(SetSpec::level_set(x, Cmp::Lt, eta + eps),
                                   SetSpec::level_set(x, Cmp::Gt, eta - eps));
}

// {n : |x_n - eta| >= delta}
inline SetSpec outside_band(const SequenceSpec& x, double eta, double delta) {
  return SetSpec::set_union(SetSpec::level_set(x, Cmp::Ge, eta + delta),
                            SetSpec::level_set(x, Cmp::Le, eta - delta));
}

}  // namespace limitlab
