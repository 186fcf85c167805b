#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsiht/projection.hpp"
#include "oracles.hpp"

using namespace gsiht;

namespace {

Eigen::VectorXd random_vector(int p, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd x(p);
  for (int i = 0; i < p; ++i) x[i] = nd(rng);
  return x;
}

void check_pythagoras(const Eigen::VectorXd& x, const ProjectionResult& r) {
  double total = x.squaredNorm();
  double gap = std::abs(total - r.captured_energy - r.residual_energy);
  CHECK(gap <= 1e-10 * std::max(1.0, total));
}

}  // namespace

TEST_SUITE_BEGIN("projection");

TEST_CASE("restrict_to zeroes everything off the support") {
  Eigen::VectorXd x(3);
  x << 1, 2, 3;
  Eigen::VectorXd r = restrict_to(x, {0, 2});
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 0.0);
  CHECK(r[2] == 3.0);
  CHECK(restrict_to(x, {}).isZero());
  CHECK((restrict_to(x, {0, 1, 2}) - x).norm() == 0.0);
}

TEST_CASE("top_s keeps the largest magnitudes, ties to lower index") {
  Eigen::VectorXd x(3);
  x << 3, 1, -2;
  ProjectionResult r = top_s_projection(x, 2);
  CHECK(r.support == Support{0, 2});
  CHECK(r.vector[0] == 3.0);
  CHECK(r.vector[1] == 0.0);
  CHECK(r.vector[2] == -2.0);

  Eigen::VectorXd ties(4);
  ties << 1, -1, 1, 0.5;
  CHECK(top_s_projection(ties, 2).support == Support{0, 1});

  CHECK(top_s_projection(x, 0).support.empty());
  CHECK(top_s_projection(x, 0).vector.isZero());
  CHECK((top_s_projection(x, 5).vector - x).norm() == 0.0);

  // exact zeros never enter the support
  Eigen::VectorXd withzero(3);
  withzero << 0, 2, 0;
  CHECK(top_s_projection(withzero, 2).support == Support{1});
}

TEST_CASE("config factories satisfy their own validation") {
  WgmParams wgm{3, 1, 2.0};
  ProjectionConfig h = ProjectionConfig::head(9, wgm);
  ProjectionConfig t = ProjectionConfig::tail(wgm);
  CHECK_NOTHROW(h.validate());
  CHECK_NOTHROW(t.validate());
  CHECK(h.kind == ProjectionKind::head);
  CHECK(t.kind == ProjectionKind::tail);
  CHECK(h.s_low == 4);  // half the node count
  CHECK(t.s_low == 3);  // the model sparsity
  CHECK(h.s_high == (int)std::llround(h.s_low * (1.0 + h.omega)));
  CHECK(t.s_high == (int)std::llround(t.s_low * (1.0 + t.omega)));

  ProjectionConfig bad = t;
  bad.s_high = bad.s_low - 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = t;
  bad.max_binary_iters = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("kind mismatches are rejected") {
  Graph g = Graph::grid(3, 3);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(9);
  WgmParams wgm{3, 1, 2.0};
  CHECK_THROWS_AS(head_projection(g, x, ProjectionConfig::tail(wgm)),
                  std::invalid_argument);
  CHECK_THROWS_AS(tail_projection(g, x, ProjectionConfig::head(9, wgm)),
                  std::invalid_argument);
}

TEST_CASE("already-feasible input is reproduced by the tail") {
  Graph g = Graph::grid(3, 3);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(9);
  x[0] = 1.0;
  x[1] = -2.0;
  x[2] = 0.5;  // connected row of the grid
  ProjectionResult r = tail_projection(g, x, ProjectionConfig::tail({3, 1, 2.0}));
  CHECK(r.support == Support{0, 1, 2});
  CHECK((r.vector - x).norm() == 0.0);
  CHECK(r.residual_energy == doctest::Approx(0.0));
}

TEST_CASE("single nonzero comes back as a singleton") {
  Graph g = Graph::grid(3, 3);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(9);
  x[4] = 3.5;
  for (auto kind : {ProjectionKind::head, ProjectionKind::tail}) {
    ProjectionResult r =
        kind == ProjectionKind::head
            ? head_projection(g, x, ProjectionConfig::head(9, {3, 1, 2.0}))
            : tail_projection(g, x, ProjectionConfig::tail({3, 1, 2.0}));
    CHECK(r.support == Support{4});
    CHECK(r.captured_energy == doctest::Approx(x.squaredNorm()));
  }
}

TEST_CASE("zero vector projects to the zero vector") {
  Graph g = Graph::grid(3, 3);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(9);
  ProjectionResult h = head_projection(g, x, ProjectionConfig::head(9, {3, 1, 2.0}));
  CHECK(h.support.empty());
  CHECK(h.vector.isZero());
  ProjectionResult t = tail_projection(g, x, ProjectionConfig::tail({3, 1, 2.0}));
  CHECK(t.support.empty());
}

TEST_CASE("head captures a constant fraction of the brute-force optimum") {
  Rng rng = make_rng(41);
  for (int rows = 3; rows <= 4; ++rows) {
    Graph g = Graph::grid(rows, rows);
    int p = g.num_nodes();
    for (int s : {2, 3}) {
      WgmParams wgm{s, 1, double(s - 1)};
      ProjectionConfig cfg = ProjectionConfig::head(p, wgm);
      for (int trial = 0; trial < 120; ++trial) {
        Eigen::VectorXd x = random_vector(p, rng);
        ProjectionResult r = head_projection(g, x, cfg);
        check_pythagoras(x, r);
        CHECK((int)r.support.size() <= cfg.s_high);
        double brute = oracle::best_captured_energy(g, x, s, 1, double(s - 1));
        CHECK(r.captured_energy >= 0.25 * brute);
      }
    }
  }
}

TEST_CASE("tail residual is within a constant factor of the optimum") {
  Rng rng = make_rng(43);
  for (int rows = 3; rows <= 4; ++rows) {
    Graph g = Graph::grid(rows, rows);
    int p = g.num_nodes();
    for (int s : {2, 3}) {
      WgmParams wgm{s, 1, double(s - 1)};
      ProjectionConfig cfg = ProjectionConfig::tail(wgm);
      for (int trial = 0; trial < 120; ++trial) {
        Eigen::VectorXd x = random_vector(p, rng);
        ProjectionResult r = tail_projection(g, x, cfg);
        check_pythagoras(x, r);
        CHECK((int)r.support.size() <= cfg.s_high);
        CHECK(is_in_wgm(g, r.support, cfg.relaxed_wgm()));
        double brute_best = oracle::best_captured_energy(g, x, s, 1, double(s - 1));
        double brute_residual = x.squaredNorm() - brute_best;
        CHECK(r.residual_energy <= 4.0 * brute_residual + 1e-12);
      }
    }
  }
}

TEST_CASE("supports are invariant under input scaling") {
  Graph g = Graph::grid(4, 4);
  Rng rng = make_rng(47);
  WgmParams wgm{3, 1, 2.0};
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::VectorXd x = random_vector(16, rng);
    // power-of-two scales keep the normalized prizes bit-identical
    for (double scale : {0x1p-30, 0x1p40}) {
      CHECK(head_projection(g, x, ProjectionConfig::head(16, wgm)).support ==
            head_projection(g, Eigen::VectorXd(scale * x),
                            ProjectionConfig::head(16, wgm))
                .support);
      CHECK(tail_projection(g, x, ProjectionConfig::tail(wgm)).support ==
            tail_projection(g, Eigen::VectorXd(scale * x),
                            ProjectionConfig::tail(wgm))
                .support);
    }
  }
}

TEST_CASE("huge inputs do not overflow the prize normalization") {
  // squaring 1e200 overflows; the normalized prizes must stay finite so the
  // projection of a blown-up gradient still returns a usable support
  Graph g = Graph::grid(4, 4);
  WgmParams wgm{3, 1, 2.0};
  Eigen::VectorXd x = Eigen::VectorXd::Zero(16);
  x[5] = 3e200;
  x[6] = -2e200;
  x[10] = 1e200;
  x[15] = 7e150;
  ProjectionResult tail = tail_projection(g, x, ProjectionConfig::tail(wgm));
  CHECK(tail.support == Support{5, 6, 10});
  CHECK(tail.vector.allFinite());
  ProjectionResult head = head_projection(g, x, ProjectionConfig::head(16, wgm));
  CHECK(head.vector.allFinite());
  CHECK(head.captured_energy > 0.0);
}

TEST_CASE("complete graph tail competes with plain top-s") {
  // every support is connected on a complete graph, so the unrestricted top-s
  // residual is the true optimum the approximation factor is measured against
  Graph g = Graph::complete(8);
  Rng rng = make_rng(53);
  WgmParams wgm{3, 1, 2.0};
  for (int trial = 0; trial < 60; ++trial) {
    Eigen::VectorXd x = random_vector(8, rng);
    ProjectionResult tail = tail_projection(g, x, ProjectionConfig::tail(wgm));
    CHECK((int)tail.support.size() <= 3);
    CHECK(tail.residual_energy <=
          4.0 * top_s_projection(x, 3).residual_energy + 1e-12);
  }
}

TEST_CASE("iteration cap is respected and fallback output is still valid") {
  Graph g = Graph::grid(4, 4);
  Rng rng = make_rng(59);
  WgmParams wgm{3, 1, 2.0};
  ProjectionConfig cfg = ProjectionConfig::tail(wgm);
  cfg.max_binary_iters = 1;
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::VectorXd x = random_vector(16, rng);
    ProjectionResult r = tail_projection(g, x, cfg);
    CHECK(r.iterations_used <= 1);
    CHECK((int)r.support.size() <= cfg.s_high);
    CHECK(is_in_wgm(g, r.support, cfg.relaxed_wgm()));
    check_pythagoras(x, r);
  }
}

TEST_CASE("duality of best supports on a brute-forced grid") {
  // the support maximizing captured energy also minimizes the residual
  Graph g = Graph::grid(3, 3);
  Rng rng = make_rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x = random_vector(9, rng);
    double best_energy = oracle::best_captured_energy(g, x, 3, 1, 2.0);
    double min_residual = x.squaredNorm() - best_energy;
    // reconstruct the minimum residual by enumeration of the same family
    double check = std::numeric_limits<double>::infinity();
    for (const auto& nodes : oracle::connected_subsets(g, 3)) {
      double captured = 0.0;
      for (int v : nodes) captured += x[v] * x[v];
      check = std::min(check, x.squaredNorm() - captured);
    }
    CHECK(min_residual <= check + 1e-12);
  }
}

TEST_SUITE_END();
