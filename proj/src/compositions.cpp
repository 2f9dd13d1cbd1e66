#include "polystar/compositions.hpp"

#include <charconv>
#include <sstream>

#include "polystar/errors.hpp"

namespace polystar {

namespace {

std::vector<int> parse_int_list(std::string_view text, bool allow_empty, int min_value) {
  std::vector<int> out;
  if (text.empty()) {
    if (allow_empty) return out;
    throw Error(ErrorCode::Schema, "empty integer list");
  }
  size_t start = 0;
  while (true) {
    size_t comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size() || item.empty() || value < min_value) {
      throw Error(ErrorCode::Schema, "bad integer list entry '" + std::string(item) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw Error(ErrorCode::InvariantViolation, "composition must be nonempty");
  prefix_.reserve(parts_.size() + 1);
  prefix_.push_back(0);
  for (int part : parts_) {
    if (part < 1) throw Error(ErrorCode::InvariantViolation, "composition parts must be >= 1");
    prefix_.push_back(prefix_.back() + part);
  }
}

Composition Composition::parse(std::string_view text) { return Composition(parse_int_list(text, false, 1)); }

Composition Composition::ones(int count) { return repeated(1, count); }

Composition Composition::repeated(int part, int count) {
  return Composition(std::vector<int>(static_cast<size_t>(count), part));
}

bool Composition::is_block_start(long position) const {
  for (size_t r = 0; r + 1 < prefix_.size(); ++r) {
    if (prefix_[r] + 1 == position) return true;
  }
  return false;
}

bool Composition::is_block_end(long position) const {
  for (size_t r = 1; r < prefix_.size(); ++r) {
    if (prefix_[r] == position) return true;
  }
  return false;
}

Composition Composition::concat(const Composition& tail) const {
  std::vector<int> parts = parts_;
  parts.insert(parts.end(), tail.parts_.begin(), tail.parts_.end());
  return Composition(std::move(parts));
}

std::string Composition::to_string() const { return join(parts_); }

void ShapeBlocks::validate() const {
  if (m.empty()) throw Error(ErrorCode::InvariantViolation, "shape needs d >= 1 blocks");
  for (int v : m) {
    if (v < 0) throw Error(ErrorCode::InvariantViolation, "shape m_i must be >= 0");
  }
  for (int v : u) {
    if (v < 0) throw Error(ErrorCode::InvariantViolation, "shape u_i must be >= 0");
  }
  if (family == Family::A && u.size() + 1 != m.size()) {
    throw Error(ErrorCode::InvariantViolation, "family A needs |u| = d - 1");
  }
  if (family == Family::B) {
    if (u.size() != m.size()) throw Error(ErrorCode::InvariantViolation, "family B needs |u| = d");
    if (u.back() < 1) throw Error(ErrorCode::InvariantViolation, "family B needs u_d >= 1");
  }
}

ShapeBlocks ShapeBlocks::parse(std::string_view text) {
  ShapeBlocks shape;
  if (text.size() < 2 || text[1] != ':' || (text[0] != 'A' && text[0] != 'B')) {
    throw Error(ErrorCode::Schema, "shape must start with 'A:' or 'B:'");
  }
  shape.family = text[0] == 'A' ? Family::A : Family::B;
  std::string_view rest = text.substr(2);
  bool have_m = false;
  while (!rest.empty()) {
    size_t semi = rest.find(';');
    std::string_view field = rest.substr(0, semi);
    rest = semi == std::string_view::npos ? std::string_view() : rest.substr(semi + 1);
    if (field.starts_with("m=")) {
      shape.m = parse_int_list(field.substr(2), false, 0);
      have_m = true;
    } else if (field.starts_with("u=")) {
      shape.u = parse_int_list(field.substr(2), true, 0);
    } else if (!field.empty()) {
      throw Error(ErrorCode::Schema, "unknown shape field '" + std::string(field) + "'");
    }
  }
  if (!have_m) throw Error(ErrorCode::Schema, "shape needs m=...");
  try {
    shape.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, e.what());
  }
  return shape;
}

std::string ShapeBlocks::to_string() const {
  return std::string(family == Family::A ? "A" : "B") + ":m=" + join(m) + ";u=" + join(u);
}

Composition shape_composition(const ShapeBlocks& shape) {
  shape.validate();
  std::vector<int> parts;
  for (int i = 0; i < shape.d(); ++i) {
    parts.push_back(shape.m[i] + 2);
    if (static_cast<size_t>(i) < shape.u.size()) parts.insert(parts.end(), shape.u[i], 1);
  }
  return Composition(std::move(parts));
}

long q_of(const Composition& s, const IndexChain& chain) {
  if (static_cast<long>(chain.size()) != s.weight()) {
    throw Error(ErrorCode::LengthMismatch, "chain length must equal |s|");
  }
  long q = 0;
  for (int r = 1; r <= s.depth(); ++r) {
    q += chain[static_cast<size_t>(s.prefix_weight(r - 1))] -
         chain[static_cast<size_t>(s.prefix_weight(r) - 1)];
  }
  return q;
}

std::vector<Rational> shape_args(const ShapeBlocks& shape, ArgVariant variant, const Rational& a,
                                 const Rational& p) {
  shape.validate();
  if (p == Rational(1)) throw Error(ErrorCode::Domain, "shape_args needs p != 1");
  const Rational one(1);
  const Rational q = one - p;
  const Rational q_inv = inverse(q);
  std::vector<Rational> args;
  auto ones = [&](int count) { args.insert(args.end(), static_cast<size_t>(count), one); };
  const int d = shape.d();

  if (shape.family == Family::A) {
    for (int i = 0; i + 1 < d; ++i) {
      args.push_back(q);
      ones(shape.m[i]);
      args.push_back(q_inv);
      ones(shape.u[i]);
    }
    args.push_back(q);
    if (variant == ArgVariant::Main) {
      ones(shape.m[d - 1]);
      args.push_back(one + a * p * q_inv);
    } else {
      ones(shape.m[d - 1] + 1);
    }
  } else {
    for (int i = 0; i < d; ++i) {
      args.push_back(q);
      ones(shape.m[i]);
      args.push_back(q_inv);
      ones(shape.u[i] - (i == d - 1 ? 1 : 0));
    }
    args.push_back(variant == ArgVariant::Main ? q + a * p : q);
  }
  return args;
}

const char* constraint_name(Constraint c) {
  switch (c) {
    case Constraint::None: return "NONE";
    case Constraint::PNotOne: return "P_NOT_ONE";
    case Constraint::MainAp: return "MAIN_AP";
    case Constraint::A1P: return "A1_P";
    case Constraint::RedBox: return "RED_BOX";
    case Constraint::RedBoxB: return "RED_BOX_B";
    case Constraint::IntroRed: return "INTRO_RED";
  }
  return "?";
}

Constraint parse_constraint(std::string_view name) {
  for (Constraint c : {Constraint::None, Constraint::PNotOne, Constraint::MainAp, Constraint::A1P,
                       Constraint::RedBox, Constraint::RedBoxB, Constraint::IntroRed}) {
    if (name == constraint_name(c)) return c;
  }
  throw Error(ErrorCode::UnknownConstraint, "unknown constraint id '" + std::string(name) + "'");
}

bool domain_check(Constraint c, const Rational& a, const Rational& p) {
  const Rational one(1);
  switch (c) {
    case Constraint::None:
      return true;
    case Constraint::PNotOne:
      return p != one;
    case Constraint::MainAp: {
      if (p == one || p.sign() <= 0) return false;
      Rational bound = Rational(2) / p - one;
      if (bound > one) bound = one;
      return abs(a) <= bound;
    }
    case Constraint::A1P:
      return a == one && p.sign() > 0 && p < one;
    case Constraint::RedBox:
      return a >= Rational(-1) && a <= Rational(1, 3) && p >= Rational(1, 2) &&
             p <= Rational(3, 2) && domain_check(Constraint::MainAp, a, p);
    case Constraint::RedBoxB:
      return p < one && domain_check(Constraint::RedBox, a, p);
    case Constraint::IntroRed:
      return abs(a) <= one && p >= Rational(1, 2) && p < one;
  }
  return false;
}

bool domain_check(std::string_view constraint_id, const Rational& a, const Rational& p) {
  return domain_check(parse_constraint(constraint_id), a, p);
}

}  // namespace polystar
