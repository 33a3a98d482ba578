// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from tests/oracles.hpp.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pairbounds/bounds.hpp"
#include "pairbounds/experiment.hpp"
#include "pairbounds/labeler.hpp"
#include "pairbounds/learner.hpp"
#include "pairbounds/pair_graph.hpp"
#include "pairbounds/random.hpp"
#include "pairbounds/relations.hpp"

using namespace pairbounds;
using oracle::HP;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

int failures = 0;

// `limit` bounds the wall time of the whole criterion, oracle work included.
void criterion(int id, const std::string& title, const std::function<void(Verdict&)>& body, double limit = 0.0) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double took = seconds_since(t0);
  if (limit > 0.0) v.require(took < limit, "runtime limit");
  std::printf("[%s] criterion %d: %s (%s%.2fs)\n", v.pass ? "PASS" : "FAIL", id, title.c_str(),
              v.detail.str().c_str(), took);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::vector<oracle::Pair> pairs_of(const TrainingGraph& g) {
  std::vector<oracle::Pair> out;
  for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

TrainingGraph graph_of(std::size_t n, const std::vector<oracle::Pair>& pairs) {
  std::vector<VertexPair> vp;
  for (const auto& [a, b] : pairs) vp.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
  return TrainingGraph::from_edge_list(n, vp);
}

// Random corpus shared by criteria 1 and 2: n in [2, 200], density varied
// from a single edge to complete.
std::vector<TrainingGraph> random_corpus(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TrainingGraph> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 2 + rng.uniform_index(199);
    const std::uint64_t total = pair_count(n);
    const double density = std::pow(rng.uniform01(), 2.0);
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(density * static_cast<double>(total))));
    out.push_back(er_sample(n, m, derive_seed(seed, i)));
  }
  return out;
}

double chi_square(const std::map<std::vector<std::uint64_t>, std::size_t>& counts, std::size_t cells,
                  std::size_t draws) {
  const double expected = static_cast<double>(draws) / static_cast<double>(cells);
  double stat = static_cast<double>(cells - counts.size()) * expected;  // unseen cells
  for (const auto& [key, c] : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return stat;
}

}  // namespace

int main() {
  const std::vector<TrainingGraph> corpus = random_corpus(1000, 2024);

  criterion(1, "handshaking and line-graph degree identity on 1000 random graphs (n <= 200)", [&](Verdict& v) {
    double lib_time = 0.0;
    std::size_t checked_pairwise = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const TrainingGraph& g = corpus[i];
      const auto edges = pairs_of(g);
      const auto t0 = Clock::now();
      const std::vector<std::size_t> deg = degree_sequence(g);
      const LineGraph lg = line_graph(g);
      lib_time += seconds_since(t0);

      const auto want = oracle::degrees(g.num_vertices(), edges);
      v.require(deg == want, "degree sequence");
      std::size_t sum = 0, wedges = 0;
      for (std::size_t d : want) {
        sum += d;
        wedges += d * (d - 1) / 2;
      }
      v.require(sum == 2 * g.num_edges(), "sum of degrees = 2m");
      v.require(lg.node_count() == g.num_edges(), "line graph order");
      v.require(lg.num_links() == wedges, "line graph size = sum C(deg, 2)");
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        v.require(lg.degree(e) == want[edges[e].first] + want[edges[e].second] - 2, "deg_L(e) = deg(u)+deg(v)-2");
      }
      if (edges.size() <= 400 && checked_pairwise < 200) {
        ++checked_pairwise;
        for (EdgeId e = 0; e < g.num_edges(); ++e) {
          v.require(lg.degree(e) == oracle::line_degree(edges, e), "pairwise line degree");
        }
      }
    }
    v.require(lib_time < 5.0, "library time under 5 s");
    v.detail << "library " << lib_time << "s, pairwise-checked " << checked_pairwise << " graphs; ";
  });

  criterion(2, "proper edge coloring with at most max-degree+1 colors; exhaustive optimality for n <= 6", [&](Verdict& v) {
    double lib_time = 0.0;
    for (const TrainingGraph& g : corpus) {
      const auto t0 = Clock::now();
      const DependencyPartition p = edge_coloring(g);
      lib_time += seconds_since(t0);
      const std::size_t delta = oracle::max_degree(g.num_vertices(), pairs_of(g));
      v.require(is_proper_edge_coloring(g, p.color_of), "proper coloring");
      v.require(p.num_colors <= delta + 1, "colors <= delta + 1");
      v.require(p.num_colors >= delta, "colors >= delta");
      for (const auto& cls : p.classes()) v.require(is_matching(g, cls), "class is a matching");
    }
    std::size_t graphs = 0, optimal = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
      const auto all = oracle::all_pairs(n);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
        const auto edges = oracle::graph_from_mask(all, mask);
        const TrainingGraph g = graph_of(n, edges);
        if (edges.empty()) {
          v.require(thrown_code([&] { edge_coloring(g); }) == Errc::EmptyGraph, "edgeless graph rejected");
          continue;
        }
        const auto t0 = Clock::now();
        const DependencyPartition p = edge_coloring(g);
        lib_time += seconds_since(t0);
        const std::size_t chi = oracle::chromatic_index(n, edges);
        const std::size_t delta = oracle::max_degree(n, edges);
        v.require(chi == delta || chi == delta + 1, "oracle chromatic index within {delta, delta+1}");
        v.require(p.num_colors == chi || p.num_colors == chi + 1, "colors within {chi', chi'+1}");
        v.require(is_proper_edge_coloring(g, p.color_of), "proper coloring (exhaustive)");
        ++graphs;
        if (p.num_colors == chi) ++optimal;
      }
    }
    v.require(lib_time < 30.0, "library time under 30 s");
    v.detail << graphs << " small graphs, " << optimal << " colored optimally, library " << lib_time << "s; ";
  });

  criterion(3, "uniform pair sampler: chi-square on G(3,2) and G(4,3), per-vertex mean degree within 2%", [&](Verdict& v) {
    const std::size_t draws = 100000;
    for (const auto& [n, m] : {std::pair<std::size_t, std::size_t>{3, 2}, {4, 3}}) {
      std::map<std::vector<std::uint64_t>, std::size_t> counts;
      for (std::size_t t = 0; t < draws; ++t) {
        const TrainingGraph g = er_sample(n, m, derive_seed(77 + n, t));
        std::vector<std::uint64_t> key;
        for (const Edge& e : g.edges()) key.push_back(e.v * (e.v - 1) / 2 + e.u);  // colex rank, computed here
        std::sort(key.begin(), key.end());
        counts[key]++;
      }
      const auto cells = static_cast<std::size_t>(std::llround(std::tgamma(pair_count(n) + 1.0) /
                                                               (std::tgamma(m + 1.0) * std::tgamma(pair_count(n) - m + 1.0))));
      v.require(counts.size() <= cells, "no impossible subsets");
      const double stat = chi_square(counts, cells, draws);
      const double crit = oracle::chi_square_quantile(static_cast<double>(cells - 1), 0.999);
      v.require(stat <= crit, "chi-square below the 0.999 quantile");
      v.detail << "G(" << n << "," << m << ") chi2=" << stat << " vs " << crit << "; ";
    }
    const std::size_t n = 100, m = 500, reps = 10000;
    std::vector<double> total(n, 0.0);
    for (std::size_t t = 0; t < reps; ++t) {
      const TrainingGraph g = er_sample(n, m, derive_seed(99, t));
      for (const Edge& e : g.edges()) {
        total[e.u] += 1;
        total[e.v] += 1;
      }
    }
    const double expected = 2.0 * m / n;
    double worst = 0.0;
    for (double s : total) worst = std::max(worst, std::abs(s / reps - expected) / expected);
    v.require(worst <= 0.02, "per-vertex mean degree within 2% of 2m/n");
    v.detail << "worst mean-degree deviation " << 100 * worst << "%; ";
  }, 30.0);

  criterion(4, "max-degree concentration on 1000 draws of G(100,500) at delta = 0.1", [&](Verdict& v) {
    const std::size_t n = 100, m = 500, trials = 1000;
    const double delta = 0.1;
    const std::uint64_t seed = 31;
    const HP bound_hp = oracle::eq_er_max_degree(n, m, HP("0.1"));
    const double bound = bound_hp.convert_to<double>();
    v.require(oracle::rel_error(er_max_degree_bound(n, m, delta), bound_hp) < 1e-6, "library bound matches oracle");
    const MaxDegreeVerification r = verify_max_degree(n, m, delta, trials, seed);
    std::size_t exceed = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrainingGraph g = er_sample(n, m, derive_seed(seed, t));
      if (static_cast<double>(oracle::max_degree(n, pairs_of(g))) >= bound) ++exceed;
    }
    const double frac = static_cast<double>(exceed) / trials;
    v.require(r.exceedances == exceed, "library exceedance count matches recount");
    v.require(frac <= delta, "exceedance fraction <= delta");
    v.detail << "bound " << bound << ", exceedances " << exceed << "/" << trials << ", mean max degree "
             << r.mean_max_degree << "; ";
  }, 10.0);

  criterion(5, "worked bound values within 1e-6 of a 50-digit oracle; SVM/ramp stability consistency 1e-12", [&](Verdict& v) {
    const double inv_e = std::exp(-1.0);
    const HP inv_e_hp = exp(HP(-1));
    auto close = [&](double got, const HP& want, const std::string& what) {
      v.require(oracle::rel_error(got, want) < 1e-6, what);
    };
    close(rad_generic_bound(0.1, 0.2, 3, 200, 0.05).total,
          oracle::eq_rad_generic(HP("0.1"), HP("0.2"), 3, 200, HP("0.05")), "rad_generic 0.4731");
    close(rad_kernel_bound(0.0, 1.0, 1.0, 1, 100, 0.5).total, oracle::eq_rad_kernel(0, 1, 1, 1, 100, HP("0.5")),
          "rad_kernel 0.4833");
    close(stab_generic_bound(0.0, 0.005, 2, 100, 1.0, inv_e).total,
          oracle::eq_stab_generic(0, HP("0.005"), 2, 100, 1, inv_e_hp), "stab_generic 0.4643");
    close(stab_ramp_bound(0.0, 0.005, 0.5, 2, 100, inv_e).total,
          oracle::eq_stab_ramp(0, HP("0.005"), HP("0.5"), 2, 100, inv_e_hp), "stab_ramp 0.7871");
    close(stab_svm_bound(0.0, 1.0, 1.0, 2, 100, inv_e).total, oracle::eq_stab_svm(0, 1, 1, 2, 100, inv_e_hp),
          "stab_svm 0.4643");
    close(er_max_degree_bound(100, 500, 0.1), oracle::eq_er_max_degree(100, 500, HP("0.1")), "max degree 24.40");
    close(er_max_degree_bound(2, 1, 0.5), oracle::eq_er_max_degree(2, 1, HP("0.5")), "max degree 3.04");
    const BoundReport er = er_rad_kernel_bound(0.0, 1.0, 1.0, 100, 500, 0.1);
    close(er.input("C"), oracle::eq_er_constant(100, 500, HP("0.1")), "C 2.5101");
    close(er.total, oracle::eq_er_rad_kernel(0, 1, 1, 100, 500, HP("0.1")), "er_rad_kernel 0.8900");

    Rng rng(5);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double remp = rng.uniform01(), B = 0.1 + 2 * rng.uniform01(), lambda = 1e-3 + rng.uniform01();
      const std::size_t m = 1 + rng.uniform_index(5000), rho = 1 + rng.uniform_index(m);
      const double delta = 0.001 + 0.998 * rng.uniform01();
      const double svm = stab_svm_bound(remp, B, lambda, rho, m, delta).total;
      const double ramp = stab_ramp_bound(remp, B * B / (2 * lambda * m), 1.0, rho, m, delta).total;
      worst = std::max(worst, std::abs(svm - ramp) / std::abs(ramp));
    }
    v.require(worst <= 1e-12, "stab_svm equals stab_ramp at gamma = 1, beta = B^2/(2 lambda m)");
    v.detail << "worst relative gap " << worst << "; ";
  });

  criterion(6, "SVM classification stability within B^2/(2 lambda m) plus solver slack on 20 datasets", [&](Verdict& v) {
    const double lambda = 1.0;
    const std::size_t n = 40, m = 50;
    double worst_ratio = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
      const auto dist = InstanceDistribution::gaussian_mixture(2, 0.2, 0.5);
      const InstanceSample s = sample_instances(dist, n, 2, derive_seed(600, i));
      const PairDataset data = build_dataset(s.points, er_sample(n, m, derive_seed(601, i)),
                                             RelationSpec::equivalence_for(dist, 2), FeatureMode::SymmetricProduct);
      const StabilityProbe p = classification_stability_probe(data, lambda, 100, 20, derive_seed(602, i), {60000, 20});
      const double certified = data.norm_bound * data.norm_bound / (2 * lambda * m);
      v.require(std::abs(p.certified - certified) <= 1e-15, "certified value");
      v.require(p.observed_sup <= p.ball_sup + 1e-15, "observed <= ball supremum");
      v.require(p.ball_sup <= certified + 2 * p.solver_slack, "ball supremum within certificate");
      worst_ratio = std::max(worst_ratio, p.ball_sup / certified);
    }
    v.detail << "worst ball_sup / certified " << worst_ratio << "; ";
  }, 120.0);

  criterion(7, "stability SVM bound is at least the Monte-Carlo risk in >= 99 of 100 G(200,2000) trials", [&](Verdict& v) {
    DefectStudyConfig c;
    c.regime = "er";
    c.n = 200;
    c.m = 2000;
    c.trials = 100;
    c.delta = 0.1;
    c.seed = 7;
    const DefectStudyResult r = defect_study(c);
    v.require(r.rows.size() == 100, "100 rows");
    v.require(r.rows_in_range(), "risks in [0, 1]");
    std::size_t covered = 0;
    for (const auto& row : r.rows) {
      if (row.risk_mc <= row.bound_stab_svm) ++covered;
    }
    v.require(covered <= r.covered_stab_svm(), "library coverage (with 3 SE slack) at least the strict count");
    v.require(covered >= 99, "coverage >= 99");
    v.detail << "covered " << covered << "/100; ";
  }, 300.0);

  criterion(8, "star labeler is vacuous, regular labeler is not (100 paired trials, lambda = 1)", [&](Verdict& v) {
    DefectStudyConfig star;
    star.regime = "star";
    star.n = 200;
    star.m = 199;
    star.lambda = 1.0;
    star.trials = 100;
    star.mc_samples = 5000;
    star.seed = 8;
    DefectStudyConfig regular = star;
    regular.regime = "regular";
    regular.k = 2;
    const DefectStudyResult s = defect_study(star);
    const DefectStudyResult r = defect_study(regular);
    std::size_t wins = 0;
    for (std::size_t t = 0; t < 100; ++t) {
      const auto& a = s.rows.at(t);
      const auto& b = r.rows.at(t);
      v.require(a.rho == 199 && a.m == 199, "star has rho = m = 199");
      v.require(b.rho == 2 && b.m == 200, "regular has rho = 2, m = 200");
      v.require(a.effective_size == 1.0, "star m/rho = 1");
      v.require(b.effective_size == 100.0, "regular m/rho = 100");
      v.require(a.bound_stab_svm >= 1.0, "star bound vacuous");
      if (a.bound_stab_svm > b.bound_stab_svm) ++wins;
    }
    v.require(wins == 100, "star bound exceeds regular bound in every trial");
    v.detail << "star > regular in " << wins << "/100; ";
  });

  criterion(9, "Rademacher Monte-Carlo below 2W sqrt(tr K)/m on 50 sets, exact at m = 1", [&](Verdict& v) {
    Rng rng(9);
    for (std::uint64_t i = 0; i < 50; ++i) {
      const auto m = static_cast<Eigen::Index>(1 + rng.uniform_index(200));
      const auto p = static_cast<Eigen::Index>(1 + rng.uniform_index(6));
      const double W = 0.1 + 3 * rng.uniform01();
      Eigen::MatrixXd phi(p, m);
      for (Eigen::Index k = 0; k < phi.size(); ++k) phi(k) = rng.uniform(-1.0, 1.0);
      double trace = 0.0;
      for (Eigen::Index c = 0; c < m; ++c) {
        for (Eigen::Index r = 0; r < p; ++r) trace += phi(r, c) * phi(r, c);
      }
      const double jensen = 2 * W * std::sqrt(trace) / static_cast<double>(m);
      const RademacherEstimate est = empirical_rademacher_mc(phi, W, 2000, derive_seed(900, i));
      v.require(est.value <= jensen + 3 * est.standard_error, "estimate below Jensen bound");
    }
    Eigen::MatrixXd one(3, 1);
    one << 0.3, -0.4, 1.2;
    const double W = 1.7;
    const RademacherEstimate single = empirical_rademacher_mc(one, W, 500, 3);
    v.require(single.value == 2 * W * one.col(0).norm(), "m = 1 equals 2W||phi||");
    v.require(std::abs(single.value - 2 * W * 1.3) <= 1e-15, "||phi|| = 1.3");
    v.require(single.standard_error == 0.0, "m = 1 has no sampling error");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
