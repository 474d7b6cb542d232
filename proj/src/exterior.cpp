#include "kt/exterior.hpp"

#include <bit>
#include <stdexcept>
#include <tuple>

namespace kt::exterior {

namespace {

const std::string kMinus = "−";
const std::string kMacron = "̄";

std::string superscript(int n) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴",
                                 "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string out = n < 0 ? "⁻" : "";
  std::string dec = std::to_string(n < 0 ? -n : n);
  for (char c : dec) out += digits[c - '0'];
  return out;
}

std::string deriv_name(Deriv v) {
  switch (v) {
    case Deriv::V1: return "V₁";
    case Deriv::V2: return "V₂";
    case Deriv::V1bar: return "V" + kMacron + "₁";
    case Deriv::V2bar: return "V" + kMacron + "₂";
  }
  return "?";
}

std::string symbol_name(FnSymbol s) {
  switch (s) {
    case FnSymbol::f: return "f";
    case FnSymbol::g: return "g";
    case FnSymbol::fbar: return "f" + kMacron;
    case FnSymbol::gbar: return "g" + kMacron;
  }
  return "?";
}

std::string function_string(const FunctionTerm& fn) {
  std::string out = symbol_name(fn.symbol);
  for (auto it = fn.word.rbegin(); it != fn.word.rend(); ++it) out = deriv_name(*it) + "(" + out + ")";
  return out;
}

std::string params_string(const Monomial& m) {
  std::string out;
  auto factor = [&out](const std::string& name, int e) {
    if (e == 0) return;
    out += name;
    if (e != 1) out += superscript(e);
  };
  factor("a", m.a);
  factor("b", m.b);
  factor("ρ", m.rho);
  return out;
}

/// Renders |r| * params with the sign returned separately.
std::string real_body(const Rational& magnitude, const std::string& params, const std::string& fn) {
  Integer p = magnitude.numerator();
  Integer q = magnitude.denominator();
  std::string core = params + fn;
  if (q == 1) {
    if (p == 1) return core.empty() ? "1" : core;
    return p.get_str() + core;
  }
  std::string num = (p == 1 && !params.empty()) ? params : p.get_str() + params;
  return "(" + num + "/" + q.get_str() + ")" + fn;
}

struct RenderedTerm {
  bool negative = false;
  std::string body;
};

RenderedTerm render_term(const Monomial& m, const GaussianRational& c, const std::string& trailer = {}) {
  std::string params = params_string(m);
  std::string fn = m.fn ? function_string(*m.fn) : std::string();
  fn += trailer;
  if (c.is_real()) return {c.re().sign() < 0, real_body(c.re().abs(), params, fn)};
  if (c.re().is_zero()) {
    return {c.im().sign() < 0, real_body(c.im().abs(), "i" + params, fn)};
  }
  return {false, "(" + c.str() + ")" + params + fn};
}

int deriv_rank(Deriv v) { return static_cast<int>(v); }

}  // namespace

Deriv conj(Deriv v) {
  switch (v) {
    case Deriv::V1: return Deriv::V1bar;
    case Deriv::V2: return Deriv::V2bar;
    case Deriv::V1bar: return Deriv::V1;
    case Deriv::V2bar: return Deriv::V2;
  }
  return v;
}

FnSymbol conj(FnSymbol s) {
  switch (s) {
    case FnSymbol::f: return FnSymbol::fbar;
    case FnSymbol::g: return FnSymbol::gbar;
    case FnSymbol::fbar: return FnSymbol::f;
    case FnSymbol::gbar: return FnSymbol::g;
  }
  return s;
}

bool MonomialOrder::operator()(const Monomial& lhs, const Monomial& rhs) const {
  if (lhs.fn.has_value() != rhs.fn.has_value()) return lhs.fn.has_value();
  if (lhs.fn) {
    const auto& l = *lhs.fn;
    const auto& r = *rhs.fn;
    if (l.symbol != r.symbol) return l.symbol < r.symbol;
    if (l.word.size() != r.word.size()) return l.word.size() > r.word.size();
    for (size_t i = 0; i < l.word.size(); ++i) {
      if (l.word[i] != r.word[i]) return deriv_rank(l.word[i]) < deriv_rank(r.word[i]);
    }
  }
  return std::tie(lhs.a, lhs.b, lhs.rho) < std::tie(rhs.a, rhs.b, rhs.rho);
}

ScalarExpr::ScalarExpr(GaussianRational c) { add_term(Monomial{}, c); }

ScalarExpr::ScalarExpr(const Monomial& m, GaussianRational c) { add_term(m, c); }

ScalarExpr ScalarExpr::a() { return ScalarExpr(Monomial{1, 0, 0, {}}, 1); }
ScalarExpr ScalarExpr::b() { return ScalarExpr(Monomial{0, 1, 0, {}}, 1); }
ScalarExpr ScalarExpr::b_inv() { return ScalarExpr(Monomial{0, -1, 0, {}}, 1); }
ScalarExpr ScalarExpr::rho() { return ScalarExpr(Monomial{0, 0, 1, {}}, 1); }
ScalarExpr ScalarExpr::rho_inv() { return ScalarExpr(Monomial{0, 0, -1, {}}, 1); }

ScalarExpr ScalarExpr::function(FnSymbol s, std::vector<Deriv> word) {
  return ScalarExpr(Monomial{0, 0, 0, FunctionTerm{s, std::move(word)}}, 1);
}

ScalarExpr ScalarExpr::c_param() { return -(a() * a() + 1) * b_inv(); }

void ScalarExpr::add_term(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  if (m.a < 0) throw std::domain_error("negative power of a");
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool ScalarExpr::has_functions() const {
  for (const auto& [m, c] : terms_) {
    if (m.fn) return true;
  }
  return false;
}

ScalarExpr ScalarExpr::apply(Deriv v) const {
  ScalarExpr out;
  for (const auto& [m, c] : terms_) {
    if (!m.fn) continue;
    Monomial dm = m;
    dm.fn->word.insert(dm.fn->word.begin(), v);
    out.add_term(dm, c);
  }
  return out;
}

ScalarExpr ScalarExpr::conj() const {
  ScalarExpr out;
  for (const auto& [m, c] : terms_) {
    Monomial cm = m;
    if (cm.fn) {
      cm.fn->symbol = exterior::conj(cm.fn->symbol);
      for (auto& d : cm.fn->word) d = exterior::conj(d);
    }
    out.add_term(cm, c.conj());
  }
  return out;
}

ScalarExpr ScalarExpr::operator-() const {
  ScalarExpr out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

ScalarExpr& ScalarExpr::operator+=(const ScalarExpr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

ScalarExpr& ScalarExpr::operator-=(const ScalarExpr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

ScalarExpr& ScalarExpr::operator*=(const ScalarExpr& o) {
  ScalarExpr out;
  for (const auto& [ml, cl] : terms_) {
    for (const auto& [mr, cr] : o.terms_) {
      if (ml.fn && mr.fn) throw std::domain_error("product of two formal functions");
      Monomial m{ml.a + mr.a, ml.b + mr.b, ml.rho + mr.rho, ml.fn ? ml.fn : mr.fn};
      out.add_term(m, cl * cr);
    }
  }
  *this = std::move(out);
  return *this;
}

std::string ScalarExpr::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    RenderedTerm t = render_term(m, c);
    if (first) {
      out += (t.negative ? kMinus : "") + t.body;
    } else {
      out += (t.negative ? " " + kMinus + " " : " + ") + t.body;
    }
    first = false;
  }
  return out;
}

namespace detail {

std::vector<int> indices_of(std::uint8_t mask) {
  std::vector<int> out;
  for (int i = 0; i < 4; ++i) {
    if (mask & (1u << i)) out.push_back(i);
  }
  return out;
}

bool MaskOrder::operator()(std::uint8_t lhs, std::uint8_t rhs) const {
  int dl = std::popcount(lhs);
  int dr = std::popcount(rhs);
  if (dl != dr) return dl < dr;
  return indices_of(lhs) < indices_of(rhs);
}

int wedge_sign(std::uint8_t lhs, std::uint8_t rhs) {
  if (lhs & rhs) return 0;
  // Count inversions: pairs (i in lhs, j in rhs) with i > j.
  int inversions = 0;
  for (int i = 0; i < 4; ++i) {
    if (!(lhs & (1u << i))) continue;
    for (int j = 0; j < i; ++j) {
      if (rhs & (1u << j)) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace detail

std::string PhiBasis::monomial_name(std::uint8_t mask) {
  static const char* single[] = {"φ¹", "φ²", "φ̄¹", "φ̄²"};
  static const char* label[] = {"1", "2", "1̄", "2̄"};
  auto idx = detail::indices_of(mask);
  if (idx.size() == 1) return single[idx[0]];
  std::string out = "φ^{";
  for (int i : idx) out += label[i];
  return out + "}";
}

std::string RealBasis::monomial_name(std::uint8_t mask) {
  static const char* single[] = {"e¹", "e²", "e³", "e⁴"};
  auto idx = detail::indices_of(mask);
  if (idx.size() == 1) return single[idx[0]];
  std::string out = "e^{";
  for (int i : idx) out += std::to_string(i + 1);
  return out + "}";
}

template <class Basis>
std::string ExteriorForm<Basis>::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mask, coeff] : terms_) {
    std::string name = mask == 0 ? std::string() : Basis::monomial_name(mask);
    RenderedTerm t;
    if (coeff.terms().size() == 1) {
      const auto& [m, c] = *coeff.terms().begin();
      t = render_term(m, c, name);
    } else {
      t = {false, "(" + coeff.str() + ")" + name};
    }
    if (first) {
      out += (t.negative ? kMinus : "") + t.body;
    } else {
      out += (t.negative ? " " + kMinus + " " : " + ") + t.body;
    }
    first = false;
  }
  return out;
}

template class ExteriorForm<PhiBasis>;
template class ExteriorForm<RealBasis>;

namespace {

template <class F>
F monomial_from_indices(std::initializer_list<int> indices) {
  F out = F::scalar(1);
  for (int i : indices) {
    if (i < 0 || i > 3) throw std::out_of_range("coframe index out of range");
    out = wedge(out, F::generator(i));
  }
  return out;
}

}  // namespace

Form phi(std::initializer_list<int> indices) { return monomial_from_indices<Form>(indices); }

RealFrameForm e(std::initializer_list<int> indices) {
  RealFrameForm out = RealFrameForm::scalar(1);
  for (int i : indices) {
    if (i < 1 || i > 4) throw std::out_of_range("real coframe index out of range");
    out = wedge(out, RealFrameForm::generator(i - 1));
  }
  return out;
}

Bidegree bidegree(std::uint8_t mask) {
  return {std::popcount(static_cast<unsigned>(mask & 0b0011u)), std::popcount(static_cast<unsigned>(mask & 0b1100u))};
}

std::optional<Bidegree> homogeneous_bidegree(const Form& alpha) {
  std::optional<Bidegree> out;
  for (const auto& [mask, c] : alpha.terms()) {
    Bidegree bd = bidegree(mask);
    if (out && !(*out == bd)) return std::nullopt;
    out = bd;
  }
  if (!out) return Bidegree{0, 0};
  return out;
}

Form conj(const Form& alpha) {
  Form out;
  for (const auto& [mask, c] : alpha.terms()) {
    Form piece = Form::scalar(c.conj());
    for (int i : detail::indices_of(mask)) piece = wedge(piece, Form::generator(i ^ 2));
    out += piece;
  }
  return out;
}

Form bidegree_project(const Form& alpha, int p, int q) {
  Form out;
  for (const auto& [mask, c] : alpha.terms()) {
    if (bidegree(mask) == Bidegree{p, q}) out.add(mask, c);
  }
  return out;
}

CoframeStructure CoframeStructure::standard() {
  Form dphi2 = ScalarExpr(GaussianRational(Rational(1, 4))) * ScalarExpr::b() *
               (phi({kPhi1, kPhi2}) + phi({kPhi1, kPhi2Bar}) + phi({kPhi2, kPhi1Bar}) - phi({kPhi1Bar, kPhi2Bar}));
  return with_dphi2(dphi2);
}

CoframeStructure CoframeStructure::with_dphi2(const Form& dphi2) {
  CoframeStructure s;
  s.dgen_[kPhi2] = dphi2;
  s.dgen_[kPhi2Bar] = conj(dphi2);
  return s;
}

namespace {

Form d_monomial(std::uint8_t mask, const CoframeStructure& structure) {
  // Graded Leibniz over the ordered generators.
  auto idx = detail::indices_of(mask);
  Form out;
  for (size_t j = 0; j < idx.size(); ++j) {
    Form term = Form::scalar(j % 2 == 0 ? 1 : -1);
    for (size_t k = 0; k < idx.size(); ++k) {
      term = wedge(term, k == j ? structure.d_generator(idx[k]) : Form::generator(idx[k]));
    }
    out += term;
  }
  return out;
}

Form d_scalar(const ScalarExpr& c) {
  Form out;
  out.add(1u << kPhi1, c.apply(Deriv::V1));
  out.add(1u << kPhi2, c.apply(Deriv::V2));
  out.add(1u << kPhi1Bar, c.apply(Deriv::V1bar));
  out.add(1u << kPhi2Bar, c.apply(Deriv::V2bar));
  return out;
}

}  // namespace

Form exterior_d(const Form& alpha, const CoframeStructure& structure) {
  Form out;
  for (const auto& [mask, c] : alpha.terms()) {
    Form basis(mask, 1);
    out += wedge(d_scalar(c), basis);
    out += c * d_monomial(mask, structure);
  }
  return out;
}

Form del(const Form& alpha, const CoframeStructure& structure) {
  Form out;
  for (const auto& [mask, c] : alpha.terms()) {
    Bidegree bd = bidegree(mask);
    Form piece = bidegree_project(exterior_d(Form(mask, c), structure), bd.p + 1, bd.q);
    out += piece;
  }
  return out;
}

Form del_bar(const Form& alpha, const CoframeStructure& structure) {
  Form out;
  for (const auto& [mask, c] : alpha.terms()) {
    Bidegree bd = bidegree(mask);
    out += bidegree_project(exterior_d(Form(mask, c), structure), bd.p, bd.q + 1);
  }
  return out;
}

RealFrameForm exterior_d(const RealFrameForm& alpha) {
  std::array<RealFrameForm, 4> dgen{};
  dgen[3] = -e({2, 3});
  RealFrameForm out;
  for (const auto& [mask, c] : alpha.terms()) {
    if (c.has_functions()) throw std::domain_error("real-frame d needs function-free coefficients");
    auto idx = detail::indices_of(mask);
    for (size_t j = 0; j < idx.size(); ++j) {
      RealFrameForm term = RealFrameForm::scalar(j % 2 == 0 ? c : -c);
      for (size_t k = 0; k < idx.size(); ++k) {
        term = wedge(term, k == j ? dgen[static_cast<size_t>(idx[k])] : RealFrameForm::generator(idx[k]));
      }
      out += term;
    }
  }
  return out;
}

namespace {

template <class To, class From>
To substitute(const From& alpha, const std::array<To, 4>& images) {
  To out;
  for (const auto& [mask, c] : alpha.terms()) {
    To piece = To::scalar(c);
    for (int i : detail::indices_of(mask)) piece = wedge(piece, images[static_cast<size_t>(i)]);
    out += piece;
  }
  return out;
}

ScalarExpr half() { return ScalarExpr(GaussianRational(Rational(1, 2))); }

}  // namespace

Form to_phi(const RealFrameForm& alpha) {
  const Form p1 = Form::generator(kPhi1), p2 = Form::generator(kPhi2);
  const Form p1b = Form::generator(kPhi1Bar), p2b = Form::generator(kPhi2Bar);
  const ScalarExpr i = ScalarExpr::i();
  std::array<Form, 4> images = {
      half() * (p1 + p1b),
      -(half() * i) * (p1 - p1b),
      half() * (p2 + p2b),
      (half() * i * ScalarExpr::b_inv()) * (p2 - p2b) - (half() * ScalarExpr::a() * ScalarExpr::b_inv()) * (p2 + p2b),
  };
  return substitute(alpha, images);
}

RealFrameForm to_real(const Form& alpha) {
  const ScalarExpr i = ScalarExpr::i();
  const ScalarExpr one_minus_ai = ScalarExpr(1) - i * ScalarExpr::a();
  const ScalarExpr one_plus_ai = ScalarExpr(1) + i * ScalarExpr::a();
  std::array<RealFrameForm, 4> images = {
      e({1}) + i * e({2}),
      one_minus_ai * e({3}) - (i * ScalarExpr::b()) * e({4}),
      e({1}) - i * e({2}),
      one_plus_ai * e({3}) + (i * ScalarExpr::b()) * e({4}),
  };
  return substitute(alpha, images);
}

Form kahler_form(const ScalarExpr& weight) {
  return ScalarExpr(GaussianRational(0, -2)) * (phi({kPhi1, kPhi1Bar}) + weight * phi({kPhi2, kPhi2Bar}));
}

Form volume_form() { return ScalarExpr::rho() * phi({kPhi1, kPhi2, kPhi1Bar, kPhi2Bar}); }

HodgeStar::HodgeStar() {
  // Hermitian norms of the coframe: |phi1|^2 = |conj phi1|^2 = 1,
  // |phi2|^2 = |conj phi2|^2 = 1/rho; the coframe is orthogonal.
  const std::array<ScalarExpr, 4> norm2 = {1, ScalarExpr::rho_inv(), 1, ScalarExpr::rho_inv()};
  const Form vol = volume_form();
  const ScalarExpr vol_coeff = vol.coefficient(0b1111);
  for (std::uint8_t mask = 0; mask < 16; ++mask) {
    // beta with conj(beta) = phi^mask: beta = conj(phi^mask) written as an
    // ordered wedge; the only alpha with <alpha, beta> != 0 is beta itself.
    Form beta = conj(Form(mask, 1));
    const auto& [beta_mask, beta_sign] = *beta.terms().begin();
    ScalarExpr inner = 1;
    for (int i : detail::indices_of(beta_mask)) inner *= norm2[static_cast<size_t>(i)];
    auto complement = static_cast<std::uint8_t>(0b1111 ^ beta_mask);
    int s = detail::wedge_sign(beta_mask, complement);
    // beta ^ (k phi^complement) = beta_sign * s * k phi^{1 2 1bar 2bar}.
    ScalarExpr k = ScalarExpr(s) * beta_sign * inner * vol_coeff;
    table_[mask] = Form(complement, k);
  }
}

Form HodgeStar::operator()(const Form& alpha) const {
  if (!homogeneous_bidegree(alpha)) throw std::invalid_argument("Hodge star of a non-homogeneous form");
  Form out;
  for (const auto& [mask, c] : alpha.terms()) out += c * table_[mask];
  return out;
}

Form hodge_star(const Form& alpha) {
  static const HodgeStar star;
  return star(alpha);
}

HarmonicDerivation derive_harmonic_transcript(const CoframeStructure& structure) {
  const ScalarExpr f = ScalarExpr::function(FnSymbol::f);
  const ScalarExpr g = ScalarExpr::function(FnSymbol::g);
  HarmonicDerivation out;
  out.s = f * Form::generator(kPhi1Bar) + g * Form::generator(kPhi2Bar);
  out.star_s = hodge_star(out.s);
  out.dbar_s = del_bar(out.s, structure);
  out.del_star_s = del(out.star_s, structure);

  const std::uint8_t top = 0b1111;
  const ScalarExpr f_rho = ScalarExpr::rho() * f;
  out.f_term_from_dphi2 =
      bidegree_project(f_rho * wedge(structure.d_generator(kPhi2), phi({kPhi1Bar, kPhi2Bar})), 2, 2).coefficient(top);
  out.f_term_from_dphi2bar =
      bidegree_project(f_rho * wedge(phi({kPhi2, kPhi1Bar}), structure.d_generator(kPhi2Bar)), 2, 2).coefficient(top);

  out.system.dbar_equation = out.dbar_s.coefficient(0b1100);
  out.system.del_star_equation = out.del_star_s.coefficient(top);
  return out;
}

HarmonicSystem derive_harmonic_system() { return derive_harmonic_transcript().system; }

bool check_almost_kahler(const CoframeStructure& structure, const ScalarExpr& weight) {
  return exterior_d(kahler_form(weight), structure).is_zero();
}

}  // namespace kt::exterior
