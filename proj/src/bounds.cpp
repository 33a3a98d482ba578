#include "pairbounds/bounds.hpp"

#include <cmath>

#include "pairbounds/error.hpp"
#include "pairbounds/random.hpp"

namespace pairbounds {

double BoundReport::term(const std::string& key) const {
  for (const auto& [k, v] : terms) {
    if (k == key) return v;
  }
  throw Error(Errc::BadParams, "report " + name + " has no term " + key);
}

double BoundReport::input(const std::string& key) const {
  for (const auto& [k, v] : inputs) {
    if (k == key) return v;
  }
  throw Error(Errc::BadParams, "report " + name + " has no input " + key);
}

nlohmann::ordered_json to_json(const BoundReport& report) {
  nlohmann::ordered_json j;
  j["bound"] = report.name;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.inputs) inputs[k] = v;
  nlohmann::ordered_json terms = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.terms) terms[k] = v;
  j["inputs"] = std::move(inputs);
  j["terms"] = std::move(terms);
  j["total"] = report.total;
  j["valid"] = report.valid;
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::BadDelta, "delta must lie in (0, 1)");
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(Errc::BadGamma, "gamma must be positive and finite");
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(Errc::BadParams, std::string(what) + " must be positive");
}

void check_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::BadParams, std::string(what) + " must be non-negative");
}

void check_examples(std::size_t m) {
  if (m == 0) throw Error(Errc::BadParams, "bounds need m >= 1");
}

BoundReport finish(BoundReport r) {
  r.total = 0.0;
  for (const auto& [k, v] : r.terms) r.total += v;
  return r;
}

}  // namespace

std::size_t chromatic_bound(std::size_t rho) { return rho + 1; }

BoundReport rad_generic_bound(double remp, double rademacher, std::size_t rho, std::size_t m, double delta) {
  check_examples(m);
  check_delta(delta);
  check_nonnegative(rademacher, "Rademacher complexity");
  check_nonnegative(remp, "empirical risk");
  const double dm = static_cast<double>(m);
  BoundReport r;
  r.name = "rad_generic";
  r.inputs = {{"remp", remp}, {"rademacher", rademacher}, {"rho", static_cast<double>(rho)},
              {"m", dm}, {"delta", delta}};
  r.terms = {{"remp", remp},
             {"rademacher", rademacher},
             {"tail", formula::chromatic_tail(static_cast<double>(rho), dm, delta)}};
  r.valid = remp <= 1.0 && rho <= m;
  r.note = "rademacher supplied by caller";
  return finish(std::move(r));
}

TraceBound kernel_rademacher_trace_bound(double gram_trace, std::size_t m, double gamma, double norm_bound) {
  check_examples(m);
  check_gamma(gamma);
  check_positive(norm_bound, "B");
  check_nonnegative(gram_trace, "Gram trace");
  const double dm = static_cast<double>(m);
  const double cap = dm * norm_bound * norm_bound;
  if (gram_trace > cap * (1.0 + 1e-12) + 1e-300) {
    throw Error(Errc::TraceExceedsBound, "tr K = " + std::to_string(gram_trace) + " exceeds m B^2 = " +
                                             std::to_string(cap));
  }
  TraceBound out;
  out.trace_term = 4.0 * std::sqrt(std::min(gram_trace, cap)) / (gamma * dm);
  out.relaxed = formula::kernel_complexity(norm_bound, gamma, dm);
  return out;
}

double linear_rademacher_trace_bound(double gram_trace, std::size_t m, double weight_cap) {
  check_examples(m);
  check_nonnegative(gram_trace, "Gram trace");
  check_positive(weight_cap, "W");
  return 2.0 * weight_cap * std::sqrt(gram_trace) / static_cast<double>(m);
}

BoundReport rad_kernel_bound(double remp_ramp, double norm_bound, double gamma, std::size_t rho, std::size_t m,
                             double delta) {
  check_examples(m);
  check_delta(delta);
  check_gamma(gamma);
  check_positive(norm_bound, "B");
  check_nonnegative(remp_ramp, "empirical ramp risk");
  const double dm = static_cast<double>(m);
  BoundReport r;
  r.name = "rad_kernel";
  r.inputs = {{"remp_ramp", remp_ramp}, {"B", norm_bound}, {"gamma", gamma},
              {"rho", static_cast<double>(rho)}, {"m", dm}, {"delta", delta}};
  r.terms = {{"remp_ramp", remp_ramp},
             {"complexity", formula::kernel_complexity(norm_bound, gamma, dm)},
             {"tail", formula::chromatic_tail(static_cast<double>(rho), dm, delta)}};
  r.valid = remp_ramp <= 1.0 && rho <= m;
  return finish(std::move(r));
}

BoundReport stab_generic_bound(double remp, double beta, std::size_t rho, std::size_t m, double loss_bound,
                               double delta) {
  check_examples(m);
  check_delta(delta);
  check_nonnegative(beta, "beta");
  check_positive(loss_bound, "M");
  check_nonnegative(remp, "empirical risk");
  if (rho == 0) throw Error(Errc::BadParams, "stability bounds need rho >= 1");
  const double dm = static_cast<double>(m);
  const double dr = static_cast<double>(rho);
  BoundReport r;
  r.name = "stab_generic";
  r.inputs = {{"remp", remp}, {"beta", beta}, {"rho", dr}, {"m", dm}, {"M", loss_bound}, {"delta", delta}};
  r.terms = {{"remp", remp},
             {"stability", 4.0 * dr * beta},
             {"tail", (4.0 * dm * beta + loss_bound) * formula::frequency_tail(dr, dm, delta)}};
  r.valid = remp <= loss_bound && rho <= m;
  return finish(std::move(r));
}

BoundReport stab_ramp_bound(double remp_ramp, double beta, double gamma, std::size_t rho, std::size_t m,
                            double delta) {
  check_gamma(gamma);
  BoundReport r = stab_generic_bound(remp_ramp, beta / gamma, rho, m, 1.0, delta);
  r.name = "stab_ramp";
  r.inputs = {{"remp_ramp", remp_ramp}, {"beta", beta}, {"gamma", gamma}, {"rho", static_cast<double>(rho)},
              {"m", static_cast<double>(m)}, {"delta", delta}};
  r.terms.front().first = "remp_ramp";
  return r;
}

BoundReport stab_svm_bound(double remp_hinge, double norm_bound, double lambda, std::size_t rho, std::size_t m,
                           double delta) {
  check_examples(m);
  check_delta(delta);
  check_positive(norm_bound, "B");
  check_positive(lambda, "lambda");
  check_nonnegative(remp_hinge, "empirical hinge risk");
  if (rho == 0) throw Error(Errc::BadParams, "stability bounds need rho >= 1");
  const double dm = static_cast<double>(m);
  const double dr = static_cast<double>(rho);
  const double b2 = norm_bound * norm_bound;
  BoundReport r;
  r.name = "stab_svm";
  r.inputs = {{"remp_hinge", remp_hinge}, {"B", norm_bound}, {"lambda", lambda},
              {"rho", dr}, {"m", dm}, {"delta", delta}};
  r.terms = {{"remp_hinge", remp_hinge},
             {"stability", 2.0 * dr * b2 / (lambda * dm)},
             {"tail", (2.0 * b2 / lambda + 1.0) * formula::frequency_tail(dr, dm, delta)}};
  r.valid = rho <= m;
  return finish(std::move(r));
}

double er_max_degree_bound(std::size_t n, std::size_t m, double delta) {
  if (n < 2) throw Error(Errc::BadParams, "degree bound needs n >= 2");
  check_examples(m);
  check_delta(delta);
  return formula::er_max_degree(static_cast<double>(n), static_cast<double>(m), delta);
}

BoundReport er_rad_kernel_bound(double remp_ramp, double norm_bound, double gamma, std::size_t n, std::size_t m,
                                double delta) {
  if (n < 2) throw Error(Errc::BadParams, "bound needs n >= 2");
  check_delta(delta);
  check_gamma(gamma);
  check_positive(norm_bound, "B");
  check_nonnegative(remp_ramp, "empirical ramp risk");
  if (2 * m < n) {
    throw Error(Errc::PreconditionMNotBigEnough,
                "m = " + std::to_string(m) + " is below n/2 = " + std::to_string(static_cast<double>(n) / 2.0));
  }
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const double c = formula::er_constant(dn, dm, delta);
  BoundReport r;
  r.name = "er_rad_kernel";
  r.inputs = {{"remp_ramp", remp_ramp}, {"B", norm_bound}, {"gamma", gamma}, {"n", dn},
              {"m", dm},           {"delta", delta},  {"C", c}};
  r.terms = {{"remp_ramp", remp_ramp},
             {"complexity", std::sqrt(32.0) * norm_bound / (gamma * std::sqrt(dn))},
             {"tail", std::sqrt((c + 1.0) / dn * std::log(2.0 / delta))}};
  r.valid = remp_ramp <= 1.0 && dm <= dn * (dn - 1.0) / 2.0;
  return finish(std::move(r));
}

RademacherDraw RademacherDraw::draw(std::size_t m, std::uint64_t seed) {
  RademacherDraw out;
  out.seed = seed;
  out.signs.resize(m);
  Rng rng(seed);
  for (auto& s : out.signs) s = rng.sign();
  return out;
}

RademacherEstimate empirical_rademacher_mc(const Eigen::MatrixXd& features, double weight_cap, std::size_t draws,
                                           std::uint64_t seed) {
  const Eigen::Index m = features.cols();
  if (m == 0) throw Error(Errc::EmptyDataset, "Rademacher complexity of zero examples");
  check_positive(weight_cap, "W");
  if (draws == 0) throw Error(Errc::BadParams, "need at least one Rademacher draw");

  RademacherEstimate out;
  out.draws = draws;
  if (m == 1) {
    // |σ| = 1, so the supremum does not depend on the draw.
    out.value = 2.0 * weight_cap * features.col(0).norm();
    return out;
  }
  Eigen::ArrayXd values(static_cast<Eigen::Index>(draws));
  Eigen::VectorXd sigma(m);
  for (std::size_t t = 0; t < draws; ++t) {
    const RademacherDraw d = RademacherDraw::draw(static_cast<std::size_t>(m), derive_seed(seed, t));
    for (Eigen::Index i = 0; i < m; ++i) sigma(i) = d.signs[static_cast<std::size_t>(i)];
    values(static_cast<Eigen::Index>(t)) = 2.0 / static_cast<double>(m) * weight_cap * (features * sigma).norm();
  }
  out.value = values.mean();
  if (draws > 1) {
    const double var = (values - out.value).square().sum() / static_cast<double>(draws - 1);
    out.standard_error = std::sqrt(var / static_cast<double>(draws));
  }
  return out;
}

}  // namespace pairbounds
