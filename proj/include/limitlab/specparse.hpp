#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "limitlab/ideal.hpp"
#include "limitlab/seqset.hpp"

// Text form of set/sequence/ideal specs. Canonical describe() strings parse
// back to equivalent specs; blocks with custom C++ rules are the one
// write-only form.
//
//   set   := empty | evens | odds | squares
//          | explicit(N,...) | arithmetic:FIRST:STEP | interval:LO:HI
//          | complement(set) | union(set,set) | intersection(set,set)
//          | levelset(seq, ge|gt|le|lt, T)
//   seq   := constant:C | indicator(set) | indicator:NAME | periodic(V,...)
//          | harmonic:S | alternating-decay | sum(seq,seq) | scale(A,seq)
//          | piecewise(set,seq,seq) | bounded(seq,B)
//   ideal := fin | density | summable:harmonic
//          | weighted-density:harmonic|sqrt|linear

namespace limitlab {

class SpecParseError : public std::runtime_error {
 public:
  SpecParseError(std::size_t offset, const std::string& message)
      : std::runtime_error(message), offset(offset) {}
  std::size_t offset;  // 0-based position in the parsed text
};

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  bool eof() { skip_ws(); return pos_ >= text_.size(); }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool try_consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           ((text_[pos_] >= 'a' && text_[pos_] <= 'z') || (text_[pos_] >= '0' && text_[pos_] <= '9') ||
            text_[pos_] == '-' || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double out = 0;
    auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{}) fail("expected a number");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return out;
  }

  Index index_number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    Index out = 0;
    auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{}) fail("expected a nonnegative integer");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return out;
  }

  [[noreturn]] void fail(const std::string& message) { throw SpecParseError(pos_, message); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline SetSpec parse_set_expr(Cursor& c);
inline SequenceSpec parse_seq_expr(Cursor& c);

inline SetSpec named_set(std::size_t at, const std::string& name) {
  if (name == "empty") return SetSpec::explicit_finite({});
  if (name == "evens") return SetSpec::evens();
  if (name == "odds") return SetSpec::odds();
  if (name == "squares") return SetSpec::squares();
  throw SpecParseError(at, "unknown set rule '" + name + "'");
}

inline SetSpec parse_set_expr(Cursor& c) {
  c.skip_ws();
  std::size_t at = c.pos();
  std::string name = c.ident();
  try {
    if (name == "explicit") {
      c.expect('(');
      std::vector<Index> elems;
      if (!c.try_consume(')')) {
        do elems.push_back(c.index_number());
        while (c.try_consume(','));
        c.expect(')');
      }
      return SetSpec::explicit_finite(std::move(elems));
    }
    if (name == "arithmetic") {
      c.expect(':');
      Index first = c.index_number();
      c.expect(':');
      Index step = c.index_number();
      return SetSpec::arithmetic(first, step);
    }
    if (name == "interval") {
      c.expect(':');
      Index lo = c.index_number();
      c.expect(':');
      Index hi = c.index_number();
      return SetSpec::interval(lo, hi);
    }
    if (name == "complement") {
      c.expect('(');
      SetSpec s = parse_set_expr(c);
      c.expect(')');
      return SetSpec::complement(std::move(s));
    }
    if (name == "union" || name == "intersection") {
      c.expect('(');
      SetSpec a = parse_set_expr(c);
      c.expect(',');
      SetSpec b = parse_set_expr(c);
      c.expect(')');
      return name == "union" ? SetSpec::set_union(std::move(a), std::move(b))
                             : SetSpec::set_intersection(std::move(a), std::move(b));
    }
    if (name == "levelset") {
      c.expect('(');
      SequenceSpec x = parse_seq_expr(c);
      c.expect(',');
      c.skip_ws();
      std::size_t cmp_at = c.pos();
      std::string cmp = c.ident();
      Cmp op;
      if (cmp == "ge") op = Cmp::Ge;
      else if (cmp == "gt") op = Cmp::Gt;
      else if (cmp == "le") op = Cmp::Le;
      else if (cmp == "lt") op = Cmp::Lt;
      else throw SpecParseError(cmp_at, "unknown comparator '" + cmp + "' (want ge|gt|le|lt)");
      c.expect(',');
      double t = c.number();
      c.expect(')');
      return SetSpec::level_set(x, op, t);
    }
    return named_set(at, name);
  } catch (const SpecError& e) {
    throw SpecParseError(at, e.what());
  }
}

inline SequenceSpec parse_seq_expr(Cursor& c) {
  c.skip_ws();
  std::size_t at = c.pos();
  std::string name = c.ident();
  try {
    if (name == "constant") {
      c.expect(':');
      return SequenceSpec::constant(c.number());
    }
    if (name == "indicator") {
      if (c.try_consume(':')) {
        c.skip_ws();
        std::size_t name_at = c.pos();
        return SequenceSpec::indicator(named_set(name_at, c.ident()));
      }
      c.expect('(');
      SetSpec s = parse_set_expr(c);
      c.expect(')');
      return SequenceSpec::indicator(std::move(s));
    }
    if (name == "periodic") {
      c.expect('(');
      std::vector<double> vals;
      do vals.push_back(c.number());
      while (c.try_consume(','));
      c.expect(')');
      return SequenceSpec::periodic(std::move(vals));
    }
    if (name == "harmonic") {
      c.expect(':');
      return SequenceSpec::harmonic(c.number());
    }
    if (name == "alternating-decay") return SequenceSpec::alternating_decay();
    if (name == "sum") {
      c.expect('(');
      SequenceSpec a = parse_seq_expr(c);
      c.expect(',');
      SequenceSpec b = parse_seq_expr(c);
      c.expect(')');
      return SequenceSpec::sum(std::move(a), std::move(b));
    }
    if (name == "scale") {
      c.expect('(');
      double f = c.number();
      c.expect(',');
      SequenceSpec x = parse_seq_expr(c);
      c.expect(')');
      return SequenceSpec::scale(f, std::move(x));
    }
    if (name == "piecewise") {
      c.expect('(');
      SetSpec s = parse_set_expr(c);
      c.expect(',');
      SequenceSpec on = parse_seq_expr(c);
      c.expect(',');
      SequenceSpec off = parse_seq_expr(c);
      c.expect(')');
      return SequenceSpec::piecewise(std::move(s), std::move(on), std::move(off));
    }
    if (name == "bounded") {
      c.expect('(');
      SequenceSpec x = parse_seq_expr(c);
      c.expect(',');
      double b = c.number();
      c.expect(')');
      return SequenceSpec::bounded(std::move(x), b);
    }
    throw SpecParseError(at, "unknown sequence rule '" + name + "'");
  } catch (const SpecError& e) {
    throw SpecParseError(at, e.what());
  }
}

}  // namespace detail

inline SetSpec parse_set(std::string_view text) {
  detail::Cursor c(text);
  SetSpec s = detail::parse_set_expr(c);
  if (!c.eof()) c.fail("trailing input after set spec");
  return s;
}

inline SequenceSpec parse_sequence(std::string_view text) {
  detail::Cursor c(text);
  SequenceSpec x = detail::parse_seq_expr(c);
  if (!c.eof()) c.fail("trailing input after sequence spec");
  return x;
}

inline IdealModel parse_ideal(std::string_view text) {
  detail::Cursor c(text);
  std::string name = c.ident();
  if (name == "fin") {
    if (!c.eof()) c.fail("trailing input after ideal name");
    return IdealModel::fin();
  }
  if (name == "density") {
    if (!c.eof()) c.fail("trailing input after ideal name");
    return IdealModel::density();
  }
  if (name == "summable") {
    c.expect(':');
    std::string rule = c.ident();
    if (rule != "harmonic") c.fail("unknown summable weights '" + rule + "'");
    if (!c.eof()) c.fail("trailing input after ideal name");
    return IdealModel::summable_harmonic();
  }
  if (name == "weighted-density") {
    c.expect(':');
    std::string rule = c.ident();
    if (!c.eof()) c.fail("trailing input after ideal name");
    if (rule == "harmonic") return IdealModel::weighted_density_harmonic();
    if (rule == "sqrt") return IdealModel::weighted_density_sqrt();
    if (rule == "linear") return IdealModel::weighted_density_linear();
    c.fail("unknown weighted-density weights '" + rule + "'");
  }
  c.fail("unknown ideal '" + name + "' (want fin|density|summable:harmonic|weighted-density:...)");
}

}  // namespace limitlab
