#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace memqec {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("BiPoly: coefficient overflow in addition");
  }
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("BiPoly: coefficient overflow in multiplication");
  }
  return r;
}

inline __int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t narrow128(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error(what);
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

// Exact rational number over int64, reduced form, den > 0.
// Intermediates go through __int128; narrowing overflow throws.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    __int128 nn = n, dd = d;
    if (dd < 0) {
      nn = -nn;
      dd = -dd;
    }
    __int128 g = detail::gcd128(nn, dd);
    if (g > 1) {
      nn /= g;
      dd /= g;
    }
    num = detail::narrow128(nn, "Rational: numerator overflow");
    den = detail::narrow128(dd, "Rational: denominator overflow");
  }

  static Rational reduce128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rational r;
    r.num = detail::narrow128(n, "Rational: numerator overflow");
    r.den = detail::narrow128(d, "Rational: denominator overflow");
    return r;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return reduce128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                     static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return reduce128(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return reduce128(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                     static_cast<__int128>(a.den) * b.den);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

// Exact bivariate polynomial in (mu, p) with int64 coefficients.
// Terms are stored sparse, keyed by (mu degree, p degree) in lexicographic
// order; zero coefficients are never kept.
class BiPoly {
 public:
  using Key = std::pair<int, int>;
  using TermMap = std::map<Key, std::int64_t>;

  BiPoly() = default;

  static BiPoly constant(std::int64_t c) { return monomial(0, 0, c); }
  static BiPoly mu() { return monomial(1, 0, 1); }
  static BiPoly p() { return monomial(0, 1, 1); }
  static BiPoly monomial(int mu_deg, int p_deg, std::int64_t c) {
    if (mu_deg < 0 || p_deg < 0) throw std::invalid_argument("BiPoly: negative degree");
    BiPoly out;
    if (c != 0) out.terms_.emplace(Key{mu_deg, p_deg}, c);
    return out;
  }

  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  std::int64_t coeff(int mu_deg, int p_deg) const {
    auto it = terms_.find({mu_deg, p_deg});
    return it == terms_.end() ? 0 : it->second;
  }

  int degree_mu() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first);
    return d;
  }
  int degree_p() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.second);
    return d;
  }

  BiPoly& operator+=(const BiPoly& other) {
    for (const auto& [k, c] : other.terms_) add_term(k, c);
    return *this;
  }
  BiPoly& operator-=(const BiPoly& other) {
    for (const auto& [k, c] : other.terms_) add_term(k, detail::checked_mul(c, -1));
    return *this;
  }
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator-(const BiPoly& a) { return BiPoly{} - a; }

  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly out;
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        out.add_term({ka.first + kb.first, ka.second + kb.second}, detail::checked_mul(ca, cb));
      }
    }
    return out;
  }
  friend BiPoly operator*(const BiPoly& a, std::int64_t s) { return a * constant(s); }
  friend BiPoly operator*(std::int64_t s, const BiPoly& a) { return a * constant(s); }

  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }

  // Horner evaluation: inner in p per mu-degree row, outer in mu.
  double eval(double mu_value, double p_value) const {
    if (terms_.empty()) return 0.0;
    std::vector<std::vector<double>> rows = dense_rows<double>();
    double acc = 0.0;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      double row = 0.0;
      for (auto jt = it->rbegin(); jt != it->rend(); ++jt) row = row * p_value + *jt;
      acc = acc * mu_value + row;
    }
    return acc;
  }

  // Exact counterpart of eval for rational points.
  Rational eval(const Rational& mu_value, const Rational& p_value) const {
    if (terms_.empty()) return Rational(0);
    std::vector<std::vector<Rational>> rows = dense_rows<Rational>();
    Rational acc(0);
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      Rational row(0);
      for (auto jt = it->rbegin(); jt != it->rend(); ++jt) row = row * p_value + *jt;
      acc = acc * mu_value + row;
    }
    return acc;
  }

  // Substitute an integer value for mu; the result lives on the mu^0 row.
  BiPoly substitute_mu(std::int64_t value) const {
    BiPoly out;
    for (const auto& [k, c] : terms_) {
      out.add_term({0, k.second}, detail::checked_mul(c, int_pow(value, k.first)));
    }
    return out;
  }
  BiPoly substitute_p(std::int64_t value) const {
    BiPoly out;
    for (const auto& [k, c] : terms_) {
      out.add_term({k.first, 0}, detail::checked_mul(c, int_pow(value, k.second)));
    }
    return out;
  }

  // Canonical text: terms ascending in (mu degree, p degree), unit
  // coefficients elided, e.g. "1 - 3*p^2 + 2*p^3 - 2*mu*p + ...".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      std::int64_t mag = c < 0 ? -c : c;
      if (first) {
        if (c < 0) out += "-";
        first = false;
      } else {
        out += c < 0 ? " - " : " + ";
      }
      std::string mono = monomial_text(k);
      if (mono.empty()) {
        out += std::to_string(mag);
      } else if (mag == 1) {
        out += mono;
      } else {
        out += std::to_string(mag) + "*" + mono;
      }
    }
    return out;
  }

  // Parses the to_string format back; accepts optional whitespace.
  static BiPoly parse(std::string_view text) {
    BiPoly out;
    std::size_t i = 0;
    auto skip_ws = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i == text.size()) throw std::invalid_argument("BiPoly::parse: empty input");
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
      negative = text[i] == '-';
      ++i;
    }
    while (true) {
      skip_ws();
      std::int64_t c = 1;
      int mu_deg = 0;
      int p_deg = 0;
      bool saw_factor = false;
      while (true) {
        skip_ws();
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          std::int64_t v = 0;
          while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = detail::checked_add(detail::checked_mul(v, 10), text[i] - '0');
            ++i;
          }
          c = detail::checked_mul(c, v);
          saw_factor = true;
        } else if (text.compare(i, 2, "mu") == 0) {
          i += 2;
          mu_deg += parse_exponent(text, i);
          saw_factor = true;
        } else if (i < text.size() && text[i] == 'p') {
          ++i;
          p_deg += parse_exponent(text, i);
          saw_factor = true;
        } else {
          throw std::invalid_argument("BiPoly::parse: expected coefficient, 'mu' or 'p'");
        }
        skip_ws();
        if (i < text.size() && text[i] == '*') {
          ++i;
          continue;
        }
        break;
      }
      if (!saw_factor) throw std::invalid_argument("BiPoly::parse: empty term");
      out.add_term({mu_deg, p_deg}, negative ? detail::checked_mul(c, -1) : c);
      skip_ws();
      if (i == text.size()) break;
      if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
      } else {
        throw std::invalid_argument("BiPoly::parse: expected '+' or '-' between terms");
      }
    }
    return out;
  }

 private:
  void add_term(Key k, std::int64_t c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second = detail::checked_add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  static std::int64_t int_pow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int e = 0; e < exp; ++e) r = detail::checked_mul(r, base);
    return r;
  }

  static std::string monomial_text(Key k) {
    std::string s;
    if (k.first > 0) s += k.first == 1 ? "mu" : "mu^" + std::to_string(k.first);
    if (k.second > 0) {
      if (!s.empty()) s += "*";
      s += k.second == 1 ? "p" : "p^" + std::to_string(k.second);
    }
    return s;
  }

  static int parse_exponent(std::string_view text, std::size_t& i) {
    if (i < text.size() && text[i] == '^') {
      ++i;
      if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw std::invalid_argument("BiPoly::parse: malformed exponent");
      }
      int e = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        e = e * 10 + (text[i] - '0');
        ++i;
      }
      return e;
    }
    return 1;
  }

  template <typename T>
  std::vector<std::vector<T>> dense_rows() const {
    std::vector<std::vector<T>> rows(static_cast<std::size_t>(degree_mu()) + 1);
    for (auto& row : rows) row.assign(static_cast<std::size_t>(degree_p()) + 1, T(0));
    for (const auto& [k, c] : terms_) {
      rows[static_cast<std::size_t>(k.first)][static_cast<std::size_t>(k.second)] = T(c);
    }
    return rows;
  }

  TermMap terms_;
};

// Markov transition weight p_{to|from} = (1-mu) p_to + mu delta_{to,from},
// with marginals p_0 = 1-p, p_1 = p.
inline BiPoly marginal_factor(int bit) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("marginal_factor: bit must be 0 or 1");
  return bit == 1 ? BiPoly::p() : BiPoly::constant(1) - BiPoly::p();
}

inline BiPoly transition_factor(int from_bit, int to_bit) {
  if ((from_bit != 0 && from_bit != 1) || (to_bit != 0 && to_bit != 1)) {
    throw std::invalid_argument("transition_factor: bits must be 0 or 1");
  }
  BiPoly out = (BiPoly::constant(1) - BiPoly::mu()) * marginal_factor(to_bit);
  if (from_bit == to_bit) out += BiPoly::mu();
  return out;
}

}  // namespace memqec
