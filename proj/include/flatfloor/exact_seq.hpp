#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flatfloor/rational.hpp"

namespace flatfloor {

enum class SeqMethod { ClosedForm, Recursion };

std::string to_string(SeqMethod method);

struct RationalSeq {
  std::string name;
  std::vector<Rational> values;  // indexed from 0
  SeqMethod method = SeqMethod::ClosedForm;
};

/// (a-1)! (b-1)! / (a+b-1)!, a, b >= 1.
Rational beta_rational(unsigned long a, unsigned long b);

// Single terms, closed form.
Rational t_seq(unsigned long n);  // 2^n / (n! (n+1)!)
Rational q_seq(unsigned long n);  // C(2n,n) / (n! (n+1)!)
Rational p_seq(unsigned long n);  // 12^{n+1} / (6 (2n+2)!)
Rational s_seq(unsigned long n);  // 2 4^n / ((n+1) C(2n+2,n+1))
Rational y_seq(unsigned long n);  // (2^n / n!) prod_{j<=n} 1/(3j-1)

/// s_n as (2/3)^n p_n / t_n.
Rational s_seq_ratio(unsigned long n);

// Whole tables 0..n_max.
RationalSeq t_table(unsigned long n_max, SeqMethod method);
RationalSeq q_table(unsigned long n_max, SeqMethod method);
RationalSeq p_table(unsigned long n_max, SeqMethod method);
RationalSeq s_table(unsigned long n_max, SeqMethod method);
RationalSeq y_table(unsigned long n_max, SeqMethod method);
/// Recursion only; ClosedForm throws std::invalid_argument.
RationalSeq u_table(unsigned long n_max, SeqMethod method = SeqMethod::Recursion);
RationalSeq ell_table(unsigned long n_max, SeqMethod method = SeqMethod::Recursion);

/// Names accepted by sequence_table: t, q, p, s, Y, u, ell.
const std::vector<std::string>& sequence_names();
bool has_closed_form(const std::string& name);
/// Throws std::invalid_argument on unknown names.
RationalSeq sequence_table(const std::string& name, unsigned long n_max, SeqMethod method);

// Convex-position probabilities without floor.
Rational valtr_square(unsigned long n);    // C(2n-2,n-1)^2 / (n!)^2
Rational valtr_triangle(unsigned long n);  // 2^n (3n-3)! / ((2n)! ((n-1)!)^3)

Rational q2_mountain(unsigned long d);  // 1 - 2/(d+1)
Rational q2_prism(unsigned long d);     // 1 - 1/d

/// Both sides of the lattice-path identity behind the parabola recursion, n >= 1.
std::pair<Rational, Rational> parabola_path_identity(unsigned long n);

/// int_{x,y>=0, x+y<=1} x^k y^j dx dy = k! j! / (k+j+2)!.
Rational simplex_moment(unsigned long k, unsigned long j);
/// Upper-bound kernel from the simplex moments D[k, j].
Rational upper_kernel(unsigned long n, unsigned long k);
Rational upper_kernel_closed(unsigned long n);  // 6 (n-1)! / (n+2)!
/// Lower-bound kernel by expanding (1-x-y)^n into monomials.
Rational lower_kernel(unsigned long n, unsigned long k);
Rational lower_kernel_closed(unsigned long n);  // 6 (n-1)! n! / (2n+1)!

}  // namespace flatfloor
