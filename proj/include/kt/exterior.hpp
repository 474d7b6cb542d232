#pragma once

// Symbolic exterior calculus on the left-invariant coframe of the
// Kodaira-Thurston nilmanifold.
//
// Coefficients are Gaussian-rational polynomials in the structure parameters
// a, b, rho (with b^-1 and rho^-1 adjoined) times at most one formal function
// f or g carrying a word of frame derivatives. Forms live either on the
// complex coframe (phi1, phi2, conj phi1, conj phi2) or on the real coframe
// (e1, e2, e3, e4).

#include "kt/numbers.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kt::exterior {

/// Frame vector fields dual to the complex coframe.
enum class Deriv : std::uint8_t { V1, V2, V1bar, V2bar };

/// Formal unknowns. The barred symbols are their complex conjugates.
enum class FnSymbol : std::uint8_t { f, g, fbar, gbar };

Deriv conj(Deriv v);
FnSymbol conj(FnSymbol s);

struct FunctionTerm {
  FnSymbol symbol = FnSymbol::f;
  /// Outermost derivative first: V2bar(V1(f)) is {V2bar, V1}.
  std::vector<Deriv> word;

  friend bool operator==(const FunctionTerm&, const FunctionTerm&) = default;
};

struct Monomial {
  int a = 0;    // >= 0
  int b = 0;    // b^-1 is b = -1
  int rho = 0;  // rho^-1 is rho = -1
  std::optional<FunctionTerm> fn;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Canonical term order: function-bearing terms first (f before g), longer
/// derivative words first, then parameter exponents.
struct MonomialOrder {
  bool operator()(const Monomial& lhs, const Monomial& rhs) const;
};

class ScalarExpr {
 public:
  using Terms = std::map<Monomial, GaussianRational, MonomialOrder>;

  ScalarExpr() = default;
  ScalarExpr(GaussianRational c);  // NOLINT(google-explicit-constructor)
  ScalarExpr(long c) : ScalarExpr(GaussianRational(c)) {}  // NOLINT(google-explicit-constructor)
  ScalarExpr(int c) : ScalarExpr(GaussianRational(c)) {}   // NOLINT(google-explicit-constructor)
  ScalarExpr(const Monomial& m, GaussianRational c);

  static ScalarExpr i() { return ScalarExpr(GaussianRational::i()); }
  static ScalarExpr a();
  static ScalarExpr b();
  static ScalarExpr b_inv();
  static ScalarExpr rho();
  static ScalarExpr rho_inv();
  static ScalarExpr function(FnSymbol s, std::vector<Deriv> word = {});
  /// c = -(a^2 + 1)/b, the lower-left entry of J_{a,b}.
  static ScalarExpr c_param();

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool has_functions() const;
  /// Applies a frame derivative. Parameters are constants, so only function
  /// terms survive; the derivative is prepended to the word.
  ScalarExpr apply(Deriv v) const;
  ScalarExpr conj() const;

  ScalarExpr operator-() const;
  ScalarExpr& operator+=(const ScalarExpr& o);
  ScalarExpr& operator-=(const ScalarExpr& o);
  /// Throws std::domain_error when two function symbols would multiply.
  ScalarExpr& operator*=(const ScalarExpr& o);

  friend ScalarExpr operator+(ScalarExpr x, const ScalarExpr& y) { return x += y; }
  friend ScalarExpr operator-(ScalarExpr x, const ScalarExpr& y) { return x -= y; }
  friend ScalarExpr operator*(ScalarExpr x, const ScalarExpr& y) { return x *= y; }
  friend bool operator==(const ScalarExpr&, const ScalarExpr&) = default;

  std::string str() const;

 private:
  void add_term(const Monomial& m, const GaussianRational& c);
  Terms terms_;
};

namespace detail {
/// Generator index order for a 4-generator exterior algebra; a monomial is a
/// bitmask. Ordered by degree, then by the increasing index word.
struct MaskOrder {
  bool operator()(std::uint8_t lhs, std::uint8_t rhs) const;
};
int wedge_sign(std::uint8_t lhs, std::uint8_t rhs);
}  // namespace detail

/// Complex coframe phi1, phi2, conj phi1, conj phi2 (bits 0..3).
struct PhiBasis {
  static std::string monomial_name(std::uint8_t mask);
};

/// Real coframe e1..e4 (bits 0..3).
struct RealBasis {
  static std::string monomial_name(std::uint8_t mask);
};

template <class Basis>
class ExteriorForm {
 public:
  using Terms = std::map<std::uint8_t, ScalarExpr, detail::MaskOrder>;

  ExteriorForm() = default;
  ExteriorForm(std::uint8_t mask, ScalarExpr coefficient) { add(mask, coefficient); }

  static ExteriorForm scalar(ScalarExpr c) { return ExteriorForm(0, std::move(c)); }
  static ExteriorForm generator(int index) { return ExteriorForm(static_cast<std::uint8_t>(1u << index), 1); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  ScalarExpr coefficient(std::uint8_t mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? ScalarExpr() : it->second;
  }

  void add(std::uint8_t mask, const ScalarExpr& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(mask, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  ExteriorForm operator-() const {
    ExteriorForm out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
  }
  ExteriorForm& operator+=(const ExteriorForm& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  ExteriorForm& operator-=(const ExteriorForm& o) { return *this += -o; }
  friend ExteriorForm operator+(ExteriorForm x, const ExteriorForm& y) { return x += y; }
  friend ExteriorForm operator-(ExteriorForm x, const ExteriorForm& y) { return x -= y; }

  friend ExteriorForm operator*(const ScalarExpr& s, const ExteriorForm& x) {
    ExteriorForm out;
    for (const auto& [m, c] : x.terms_) out.add(m, s * c);
    return out;
  }

  friend bool operator==(const ExteriorForm&, const ExteriorForm&) = default;

  std::string str() const;

 private:
  Terms terms_;
};

using Form = ExteriorForm<PhiBasis>;
using RealFrameForm = ExteriorForm<RealBasis>;

template <class Basis>
ExteriorForm<Basis> wedge(const ExteriorForm<Basis>& lhs, const ExteriorForm<Basis>& rhs) {
  ExteriorForm<Basis> out;
  for (const auto& [ml, cl] : lhs.terms()) {
    for (const auto& [mr, cr] : rhs.terms()) {
      int s = detail::wedge_sign(ml, mr);
      if (s == 0) continue;
      out.add(static_cast<std::uint8_t>(ml | mr), ScalarExpr(s) * cl * cr);
    }
  }
  return out;
}

// Generator indices on the complex coframe.
inline constexpr int kPhi1 = 0;
inline constexpr int kPhi2 = 1;
inline constexpr int kPhi1Bar = 2;
inline constexpr int kPhi2Bar = 3;

/// Monomial from an ordered list of generator indices, with the permutation
/// sign absorbed into the coefficient.
Form phi(std::initializer_list<int> indices);
RealFrameForm e(std::initializer_list<int> indices);  // 1-based: e({2,3}) = e2^e3

struct Bidegree {
  int p = 0;
  int q = 0;
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
};
Bidegree bidegree(std::uint8_t mask);
/// Bidegree when every monomial shares one.
std::optional<Bidegree> homogeneous_bidegree(const Form& alpha);

/// Complex conjugation: toggles bars, reorders with sign, conjugates coefficients.
Form conj(const Form& alpha);

Form bidegree_project(const Form& alpha, int p, int q);

/// Exterior derivatives of the four coframe generators. d on general forms
/// follows from these and the frame derivatives of the coefficients.
class CoframeStructure {
 public:
  /// d(phi1) = 0, d(phi2) = (b/4)(phi^{12} + phi^{1 2bar} + phi^{2 1bar} - phi^{1bar 2bar}).
  static CoframeStructure standard();
  /// Replaces d(phi2); d(conj phi2) follows by conjugation.
  static CoframeStructure with_dphi2(const Form& dphi2);

  const Form& d_generator(int index) const { return dgen_[static_cast<size_t>(index)]; }

 private:
  std::array<Form, 4> dgen_;
};

Form exterior_d(const Form& alpha, const CoframeStructure& structure = CoframeStructure::standard());
/// Bidegree-raising parts of d, applied per homogeneous component.
Form del(const Form& alpha, const CoframeStructure& structure = CoframeStructure::standard());
Form del_bar(const Form& alpha, const CoframeStructure& structure = CoframeStructure::standard());

/// d on the real coframe: de1 = de2 = de3 = 0, de4 = -e2^e3. Coefficients
/// must be function-free.
RealFrameForm exterior_d(const RealFrameForm& alpha);

/// Exact change of basis. e1 = (phi1 + conj phi1)/2, e2 = -(i/2)(phi1 - conj phi1),
/// e3 = (phi2 + conj phi2)/2, e4 = (i/2b)(phi2 - conj phi2) - (a/2b)(phi2 + conj phi2).
Form to_phi(const RealFrameForm& alpha);
RealFrameForm to_real(const Form& alpha);

/// Fundamental form -2i(phi^{1 1bar} + rho phi^{2 2bar}); the second weight is
/// overridable.
Form kahler_form(const ScalarExpr& weight = ScalarExpr::rho());
/// Volume form rho phi^{1 2 1bar 2bar}.
Form volume_form();

/// Hodge star of the metric phi1 (x) conj phi1 + rho phi2 (x) conj phi2 + c.c.,
/// defined by alpha ^ *conj(beta) = <alpha, beta> vol and extended linearly
/// over coefficients. Built once as a 16-entry table.
class HodgeStar {
 public:
  HodgeStar();

  /// Throws std::invalid_argument for non-homogeneous input.
  Form operator()(const Form& alpha) const;
  const Form& image(std::uint8_t mask) const { return table_[mask]; }

 private:
  std::array<Form, 16> table_;
};

Form hodge_star(const Form& alpha);

/// Harmonicity conditions for s = f conj(phi1) + g conj(phi2).
struct HarmonicSystem {
  ScalarExpr dbar_equation;      // coefficient of phi^{1bar 2bar} in dbar s
  ScalarExpr del_star_equation;  // coefficient of phi^{1 2 1bar 2bar} in del * s
};

/// Full symbolic transcript of the derivation.
struct HarmonicDerivation {
  Form s;
  Form star_s;
  Form dbar_s;
  Form del_star_s;
  /// The two generator-derivative contributions to del * s coming from
  /// f rho phi^{2 1bar 2bar}; they cancel.
  ScalarExpr f_term_from_dphi2;
  ScalarExpr f_term_from_dphi2bar;
  HarmonicSystem system;
};

HarmonicDerivation derive_harmonic_transcript(const CoframeStructure& structure = CoframeStructure::standard());
HarmonicSystem derive_harmonic_system();

/// True iff d(omega) vanishes identically for the given structure.
bool check_almost_kahler(const CoframeStructure& structure = CoframeStructure::standard(),
                         const ScalarExpr& weight = ScalarExpr::rho());

}  // namespace kt::exterior
