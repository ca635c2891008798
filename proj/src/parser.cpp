#include "padyn/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace padyn {

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::vector<std::string>& vars, std::uint64_t p)
      : s_(text), vars_(vars), p_(p) {}

  Polynomial parse() {
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    Polynomial e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, msg + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    const bool neg = accept('-');
    Polynomial acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (accept('+'))
        acc = acc + term();
      else if (accept('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        skip();
        const std::size_t at = pos_;
        const BigInt d = integer();
        if (d == 0) {
          pos_ = at;
          fail("division by zero");
        }
        check_denominator(d, at);
        acc = acc.scaled(Rational(1) / Rational(d));
      } else {
        return acc;
      }
    }
  }

  Polynomial factor() {
    Polynomial b = base();
    if (accept('^')) {
      skip();
      const std::size_t at = pos_;
      const BigInt e = integer();
      if (e > 4096) {
        pos_ = at;
        fail("exponent too large");
      }
      b = b.pow(static_cast<unsigned>(e));
    }
    return b;
  }

  Polynomial base() {
    skip();
    if (pos_ == s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Polynomial::constant(vars_, Rational(integer()));
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end())
        throw Error(ErrorCode::UnknownVariable,
                    "unknown variable '" + name + "' at position " + std::to_string(start));
      return Polynomial::variable(vars_, static_cast<std::size_t>(it - vars_.begin()));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  BigInt integer() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer");
    return BigInt(std::string(s_.substr(start, pos_ - start)));
  }

  void check_denominator(const BigInt& d, std::size_t at) const {
    if (d % p_ == 0)
      throw Error(ErrorCode::NonIntegralCoefficient,
                  "denominator " + d.str() + " at position " + std::to_string(at) + " is divisible by " +
                      std::to_string(p_));
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::uint64_t p_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

[[noreturn]] void bad_line(int line, const std::string& msg) {
  throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ": " + msg);
}

long parse_int(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  bad_line(line, key + " must be an integer");
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables, std::uint64_t p) {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, "p must be a prime");
  return ExprParser(text, variables, p).parse();
}

const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::P1: return "p1";
    case MapKind::Affine: return "affine";
    case MapKind::PolyChart: return "poly-chart";
  }
  return "?";
}

MapDescription parse_map_description(std::string_view text) {
  MapDescription d;
  std::map<std::string, std::string> model;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string ln = trim(raw);
    if (ln.empty() || ln[0] == '#' || ln[0] == ';') continue;
    if (ln.front() == '[') {
      if (ln.back() != ']') bad_line(line, "unterminated section header");
      section = trim(std::string_view(ln).substr(1, ln.size() - 2));
      if (section != "model" && section != "options") bad_line(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = ln.find('=');
    if (eq == std::string::npos) bad_line(line, "expected key = value");
    const std::string key = trim(std::string_view(ln).substr(0, eq));
    std::string value = trim(std::string_view(ln).substr(eq + 1));
    if (!value.empty() && value.front() == '"') {
      const auto close = value.find('"', 1);
      if (close == std::string::npos) bad_line(line, "unterminated string");
      const std::string rest = trim(std::string_view(value).substr(close + 1));
      if (!rest.empty() && rest[0] != '#') bad_line(line, "trailing text after string");
      value = value.substr(1, close - 1);
    }
    if (key.empty()) bad_line(line, "empty key");
    if (section.empty()) bad_line(line, "assignment outside a section");
    auto& target = section == "model" ? model : d.options;
    if (!target.emplace(key, value).second) bad_line(line, "duplicate key '" + key + "'");
  }

  auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = model.find(key);
    if (it == model.end()) return std::nullopt;
    std::string v = it->second;
    model.erase(it);
    return v;
  };
  auto need = [&](const char* key) {
    auto v = take(key);
    if (!v) throw Error(ErrorCode::SyntaxError, std::string("[model] is missing '") + key + "'");
    return *v;
  };

  const std::string kind = need("kind");
  if (kind == "p1")
    d.kind = MapKind::P1;
  else if (kind == "affine")
    d.kind = MapKind::Affine;
  else if (kind == "poly-chart")
    d.kind = MapKind::PolyChart;
  else
    throw Error(ErrorCode::SyntaxError, "unknown kind '" + kind + "'");

  const long p = parse_int(need("p"), 0, "p");
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
    throw Error(ErrorCode::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
  d.p = static_cast<std::uint64_t>(p);

  auto opt_int = [&](const char* key) -> std::optional<long> {
    std::optional<std::string> v;
    if (auto it = d.options.find(key); it != d.options.end()) v = it->second;
    if (auto m = take(key)) v = m;
    if (!v) return std::nullopt;
    return parse_int(*v, 0, key);
  };
  if (auto k = opt_int("precision")) {
    if (*k < kMinPrecision || *k > 62) throw Error(ErrorCode::InvalidArgument, "precision out of range");
    d.precision = static_cast<int>(*k);
  }
  if (auto b = opt_int("val_floor")) {
    if (*b < 0) throw Error(ErrorCode::InvalidArgument, "val_floor must be nonnegative");
    d.val_floor = static_cast<int>(*b);
  }

  switch (d.kind) {
    case MapKind::P1:
      d.variables = {take("variable").value_or("x")};
      d.numerator = need("numerator");
      d.denominator = take("denominator").value_or("1");
      break;
    case MapKind::Affine:
      d.variables = split(need("variables"), ',');
      if (d.variables.empty()) throw Error(ErrorCode::SyntaxError, "affine model needs variables");
      d.relations = split(take("relations").value_or(""), ';');
      d.map = split(need("map"), ';');
      break;
    case MapKind::PolyChart:
      d.variables = {take("variable").value_or("z")};
      d.polynomial = need("polynomial");
      break;
  }
  if (!model.empty()) throw Error(ErrorCode::SyntaxError, "unknown [model] key '" + model.begin()->first + "'");
  return d;
}

MapDescription load_map_description(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map_description(buf.str());
}

Polynomial chart_polynomial(const MapDescription& desc) {
  if (desc.kind != MapKind::PolyChart) throw Error(ErrorCode::InvalidArgument, "not a poly-chart description");
  return parse_polynomial(desc.polynomial, desc.variables, desc.p);
}

Model build_model(const MapDescription& desc) {
  const auto& vars = desc.variables;
  switch (desc.kind) {
    case MapKind::P1:
      return Model::p1(desc.p, parse_polynomial(desc.numerator, vars, desc.p),
                       parse_polynomial(desc.denominator, vars, desc.p));
    case MapKind::Affine: {
      std::vector<Polynomial> rel, map;
      for (const auto& r : desc.relations) rel.push_back(parse_polynomial(r, vars, desc.p));
      for (const auto& m : desc.map) map.push_back(parse_polynomial(m, vars, desc.p));
      return Model::affine(desc.p, vars, std::move(rel), std::move(map));
    }
    case MapKind::PolyChart:
      return Model::affine(desc.p, vars, {}, {chart_polynomial(desc)});
  }
  throw Error(ErrorCode::Internal, "unreachable");
}

}  // namespace padyn
