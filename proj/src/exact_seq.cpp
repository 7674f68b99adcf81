#include "flatfloor/exact_seq.hpp"

#include <stdexcept>

namespace flatfloor {

namespace {

Rational ratio(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational frac(unsigned long num, unsigned long den) { return ratio(Integer(num), Integer(den)); }

Integer pow2(unsigned long n) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, n);
  return r;
}

Integer pow_ui(unsigned long base, unsigned long n) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, n);
  return r;
}

template <class Term>
RationalSeq closed_table(const char* name, unsigned long n_max, Term term) {
  RationalSeq seq{name, {}, SeqMethod::ClosedForm};
  seq.values.reserve(n_max + 1);
  for (unsigned long n = 0; n <= n_max; ++n) seq.values.push_back(term(n));
  return seq;
}

// a_n = kernel(n, k) * sum_k a_k a_{n-1-k}, with a_0 = 1
template <class Kernel>
std::vector<Rational> convolution(unsigned long n_max, Kernel kernel) {
  std::vector<Rational> a{Rational(1)};
  for (unsigned long n = 1; n <= n_max; ++n) {
    Rational sum = 0;
    for (unsigned long k = 0; k < n; ++k) sum += kernel(n, k) * a[k] * a[n - 1 - k];
    a.push_back(sum);
  }
  return a;
}

// a_n = kernel(n) * sum_k a_k a_{n-1-k}, for kernels that do not depend on k
template <class Kernel>
std::vector<Rational> symmetric_convolution(unsigned long n_max, Kernel kernel) {
  std::vector<Rational> a{Rational(1)};
  for (unsigned long n = 1; n <= n_max; ++n) {
    Rational sum = 0;
    for (unsigned long k = 0; 2 * k + 1 < n; ++k) sum += a[k] * a[n - 1 - k];
    sum *= 2;
    if (n % 2) sum += a[(n - 1) / 2] * a[(n - 1) / 2];
    a.push_back(kernel(n) * sum);
  }
  return a;
}

}  // namespace

std::string to_string(SeqMethod method) { return method == SeqMethod::ClosedForm ? "closed-form" : "recursion"; }

Rational beta_rational(unsigned long a, unsigned long b) {
  if (a < 1 || b < 1) throw std::invalid_argument("beta_rational needs a, b >= 1");
  return ratio(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1));
}

Rational t_seq(unsigned long n) { return ratio(pow2(n), factorial(n) * factorial(n + 1)); }

Rational q_seq(unsigned long n) { return ratio(binomial(2 * n, n), factorial(n) * factorial(n + 1)); }

Rational p_seq(unsigned long n) { return ratio(pow_ui(12, n + 1), 6 * factorial(2 * n + 2)); }

Rational s_seq(unsigned long n) { return ratio(2 * pow_ui(4, n), (n + 1) * binomial(2 * n + 2, n + 1)); }

Rational s_seq_ratio(unsigned long n) { return pow(frac(2, 3), n) * p_seq(n) / t_seq(n); }

Rational y_seq(unsigned long n) {
  Integer den = factorial(n);
  for (unsigned long j = 1; j <= n; ++j) den *= 3 * j - 1;
  return ratio(pow2(n), den);
}

RationalSeq t_table(unsigned long n_max, SeqMethod method) {
  if (method == SeqMethod::ClosedForm) return closed_table("t", n_max, t_seq);
  RationalSeq seq{"t", {Rational(1)}, method};
  for (unsigned long n = 1; n <= n_max; ++n) seq.values.push_back(2 * beta_rational(2, n) * seq.values.back());
  return seq;
}

RationalSeq q_table(unsigned long n_max, SeqMethod method) {
  if (method == SeqMethod::ClosedForm) return closed_table("q", n_max, q_seq);
  const RationalSeq t = t_table(n_max, SeqMethod::Recursion);
  RationalSeq seq{"q", {Rational(1)}, method};
  for (unsigned long n = 1; n <= n_max; ++n) {
    Rational sum = 0;
    for (unsigned long k = 0; k < n; ++k)
      sum += Rational(binomial(n - 1, k)) * t.values[k] * t.values[n - 1 - k] * beta_rational(k + 1, n - k);
    seq.values.push_back(sum / Rational(pow2(n - 1)));
  }
  return seq;
}

RationalSeq p_table(unsigned long n_max, SeqMethod method) {
  if (method == SeqMethod::ClosedForm) return closed_table("p", n_max, p_seq);
  std::vector<Integer> fact(3 * n_max + 2);
  fact[0] = 1;
  for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<unsigned long>(i);
  auto kernel = [&](unsigned long n, unsigned long k) -> Rational {
    const unsigned long j = n - 1 - k;
    return Rational(binomial(n - 1, k)) * ratio(6 * fact[1 + 3 * k] * fact[1 + 3 * j], fact[3 * n]);
  };
  return {"p", convolution(n_max, kernel), method};
}

RationalSeq s_table(unsigned long n_max, SeqMethod method) {
  if (method == SeqMethod::ClosedForm) return closed_table("s", n_max, s_seq);
  const RationalSeq p = p_table(n_max, SeqMethod::Recursion);
  const RationalSeq t = t_table(n_max, SeqMethod::Recursion);
  RationalSeq seq{"s", {}, method};
  Rational scale = 1;
  for (unsigned long n = 0; n <= n_max; ++n) {
    seq.values.push_back(scale * p.values[n] / t.values[n]);
    scale *= frac(2, 3);
  }
  return seq;
}

RationalSeq y_table(unsigned long n_max, SeqMethod method) {
  if (method == SeqMethod::ClosedForm) return closed_table("Y", n_max, y_seq);
  RationalSeq seq{"Y", {Rational(1)}, method};
  for (unsigned long n = 1; n <= n_max; ++n) seq.values.push_back(seq.values.back() * frac(2, n * (3 * n - 1)));
  return seq;
}

RationalSeq u_table(unsigned long n_max, SeqMethod method) {
  if (method != SeqMethod::Recursion) throw std::invalid_argument("u has no closed form");
  auto kernel = [](unsigned long n) { return frac(6, (n + 2) * (n + 1) * n); };
  return {"u", symmetric_convolution(n_max, kernel), method};
}

RationalSeq ell_table(unsigned long n_max, SeqMethod method) {
  if (method != SeqMethod::Recursion) throw std::invalid_argument("ell has no closed form");
  return {"ell", symmetric_convolution(n_max, lower_kernel_closed), method};
}

const std::vector<std::string>& sequence_names() {
  static const std::vector<std::string> names{"t", "q", "p", "s", "Y", "u", "ell"};
  return names;
}

bool has_closed_form(const std::string& name) { return name != "u" && name != "ell"; }

RationalSeq sequence_table(const std::string& name, unsigned long n_max, SeqMethod method) {
  if (name == "t") return t_table(n_max, method);
  if (name == "q") return q_table(n_max, method);
  if (name == "p") return p_table(n_max, method);
  if (name == "s") return s_table(n_max, method);
  if (name == "Y" || name == "y") return y_table(n_max, method);
  if (name == "u") return u_table(n_max, method);
  if (name == "ell" || name == "l") return ell_table(n_max, method);
  throw std::invalid_argument("unknown sequence '" + name + "'");
}

Rational valtr_square(unsigned long n) {
  if (n < 1) throw std::invalid_argument("valtr_square needs n >= 1");
  const Integer c = binomial(2 * n - 2, n - 1);
  const Integer f = factorial(n);
  return ratio(c * c, f * f);
}

Rational valtr_triangle(unsigned long n) {
  if (n < 1) throw std::invalid_argument("valtr_triangle needs n >= 1");
  const Integer f = factorial(n - 1);
  return ratio(pow2(n) * factorial(3 * n - 3), factorial(2 * n) * f * f * f);
}

Rational q2_mountain(unsigned long d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  return 1 - frac(2, d + 1);
}

Rational q2_prism(unsigned long d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  return 1 - frac(1, d);
}

std::pair<Rational, Rational> parabola_path_identity(unsigned long n) {
  if (n < 1) throw std::invalid_argument("identity needs n >= 1");
  auto paths = [](unsigned long m, unsigned long k) -> Rational { return binomial(3 * m + k, m) * frac(k, 3 * m + k); };
  Rational rhs = 0;
  for (unsigned long k = 0; k < n; ++k) rhs += paths(k, 2) * paths(n - 1 - k, 2);
  return {paths(n - 1, 4), rhs};
}

Rational simplex_moment(unsigned long k, unsigned long j) {
  return ratio(factorial(k) * factorial(j), factorial(k + j + 2));
}

Rational upper_kernel(unsigned long n, unsigned long k) {
  if (k >= n) throw std::invalid_argument("kernel needs k < n");
  const unsigned long j = n - 1 - k;
  return 6 * Rational(binomial(n - 1, k)) *
         (simplex_moment(k, j) - simplex_moment(k, j + 1) - simplex_moment(k + 1, j));
}

Rational upper_kernel_closed(unsigned long n) { return ratio(6 * factorial(n - 1), factorial(n + 2)); }

Rational lower_kernel(unsigned long n, unsigned long k) {
  if (k >= n) throw std::invalid_argument("kernel needs k < n");
  // (1 - x - y)^n = sum_{a+b<=n} n!/(a! b! (n-a-b)!) (-x)^a (-y)^b
  const unsigned long j = n - 1 - k;
  Rational sum = 0;
  for (unsigned long a = 0; a <= n; ++a) {
    for (unsigned long b = 0; a + b <= n; ++b) {
      Rational term = ratio(factorial(n), factorial(a) * factorial(b) * factorial(n - a - b)) * simplex_moment(j + a, k + b);
      if ((a + b) % 2) sum -= term; else sum += term;
    }
  }
  return 6 * Rational(binomial(n - 1, k)) * sum;
}

Rational lower_kernel_closed(unsigned long n) {
  return ratio(6 * factorial(n - 1) * factorial(n), factorial(2 * n + 1));
}

}  // namespace flatfloor
