#include <catch2/catch_amalgamated.hpp>

#include "spacobi/clusters.hpp"
#include "spacobi/rng.hpp"

#include "oracle_helpers.hpp"

using namespace spacobi;

TEST_CASE("extract_clusters") {
  SECTION("identical rows collapse to one cluster") {
    DenseMatrix a(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = double(j);
    const auto r = extract_clusters(a);
    REQUIRE(r.row_labels == std::vector<std::size_t>{0, 0, 0, 0});
  }
  SECTION("zero matrix drops every feature") {
    const auto r = extract_clusters(DenseMatrix(3, 4, 0.0));
    REQUIRE(r.feature_mask == std::vector<bool>{false, false, false, false});
    REQUIRE(r.row_labels == std::vector<std::size_t>{0, 0, 0});
  }
  SECTION("block-constant matrix recovers its two row blocks") {
    DenseMatrix a(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        a(i, j) = (i < 2 ? 1.0 : 5.0) + (j < 2 ? 0.0 : 2.0);
    const auto r = extract_clusters(a);
    REQUIRE(r.row_labels == std::vector<std::size_t>{0, 0, 1, 1});
    REQUIRE(r.col_labels == std::vector<std::size_t>{0, 0, 1, 1});
    REQUIRE(r.feature_mask == std::vector<bool>{true, true, true, true});

    // Exhaustive pairwise-threshold cross-check.
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        const double d = std::sqrt(squared_distance(a.row(i), a.row(j)));
        if (d <= r.threshold)
          REQUIRE(r.row_labels[i] == r.row_labels[j]);
        else
          REQUIRE(r.row_labels[i] != r.row_labels[j]);
      }
  }
  SECTION("row permutation permutes labels") {
    Rng rng(3);
    DenseMatrix a(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = double(i / 2) * 10.0 + j;
    const auto base = extract_clusters(a);
    DenseMatrix ap(4, 3);
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) ap(i, j) = a(perm[i], j);
    const auto permuted = extract_clusters(ap);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        REQUIRE((permuted.row_labels[i] == permuted.row_labels[j]) ==
                (base.row_labels[perm[i]] == base.row_labels[perm[j]]));
  }
  SECTION("eps must be positive") {
    REQUIRE_THROWS_AS(extract_clusters(DenseMatrix(2, 2), 0.0), BadSpecError);
  }
}

TEST_CASE("adjusted_rand_index") {
  using L = std::vector<std::size_t>;
  SECTION("identical partitions score one") {
    REQUIRE(adjusted_rand_index(L{0, 0, 1, 2}, L{5, 5, 7, 9}) == 1.0);
  }
  SECTION("single cluster against single cluster scores one") {
    REQUIRE(adjusted_rand_index(L{0, 0, 0}, L{4, 4, 4}) == 1.0);
  }
  SECTION("crossed labels match the pair-counting oracle") {
    const L a{1, 1, 2, 2};
    const L b{1, 2, 1, 2};
    REQUIRE(adjusted_rand_index(a, b) ==
            Catch::Approx(oracle::ari_pair_counting(a, b)).margin(1e-12));
  }
  SECTION("random labelings match the pair-counting oracle") {
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t n = 3 + std::size_t(rng.uniform_below(8));
      L a(n), b(n);
      for (auto& v : a) v = std::size_t(rng.uniform_below(3));
      for (auto& v : b) v = std::size_t(rng.uniform_below(3));
      REQUIRE(adjusted_rand_index(a, b) ==
              Catch::Approx(oracle::ari_pair_counting(a, b)).margin(1e-12));
    }
  }
  SECTION("invariant under label permutation") {
    Rng rng(11);
    const L a{0, 1, 1, 2, 0, 2};
    const L b{1, 1, 0, 2, 2, 0};
    L b_renamed(b.size());
    const std::vector<std::size_t> rename{7, 3, 5};
    for (std::size_t i = 0; i < b.size(); ++i) b_renamed[i] = rename[b[i]];
    REQUIRE(adjusted_rand_index(a, b) == adjusted_rand_index(a, b_renamed));
  }
  SECTION("length validation") {
    REQUIRE_THROWS_AS(adjusted_rand_index(L{0, 1}, L{0, 1, 2}),
                      LengthMismatchError);
    REQUIRE_THROWS_AS(adjusted_rand_index(L{0}, L{0}), LengthMismatchError);
  }
}

TEST_CASE("selection_rates") {
  using B = std::vector<bool>;
  SECTION("perfect mask") {
    const auto [fnr, fpr] = selection_rates(B{true, false}, B{true, false});
    REQUIRE(fnr == 0.0);
    REQUIRE(fpr == 0.0);
  }
  SECTION("all-true mask retains all noise") {
    const auto [fnr, fpr] =
        selection_rates(B{true, true, true}, B{true, false, false});
    REQUIRE(fnr == 0.0);
    REQUIRE(fpr == 1.0);
  }
  SECTION("counted example") {
    // 10 features: 4 informative (2 missed), 6 noise (3 retained).
    const B truth{true, true, true, true, false, false,
                  false, false, false, false};
    const B mask{true, true, false, false, true, true,
                 true, false, false, false};
    const auto [fnr, fpr] = selection_rates(mask, truth);
    REQUIRE(fnr == Catch::Approx(0.5));
    REQUIRE(fpr == Catch::Approx(0.5));
  }
  SECTION("degenerate truth is rejected") {
    REQUIRE_THROWS_AS(selection_rates(B{true, true}, B{true, true}),
                      DegenerateTruthError);
    REQUIRE_THROWS_AS(selection_rates(B{true}, B{true, false}),
                      LengthMismatchError);
  }
}

TEST_CASE("selection_auc") {
  using P = std::vector<std::pair<double, double>>;
  SECTION("path through (0,1) is perfect") {
    REQUIRE(selection_auc(P{{0.0, 1.0}, {0.5, 1.0}}) == Catch::Approx(1.0));
  }
  SECTION("diagonal path is chance") {
    REQUIRE(selection_auc(P{{0.25, 0.25}, {0.5, 0.5}, {0.75, 0.75}}) ==
            Catch::Approx(0.5));
  }
  SECTION("three-point path matches a hand trapezoid sum") {
    // Anchors (0,0), (1,1) plus (0.2, 0.6), (0.5, 0.8), (0.9, 0.95):
    // 0.2*0.3 + 0.3*0.7 + 0.4*0.875 + 0.1*0.975 = 0.7175
    REQUIRE(selection_auc(P{{0.2, 0.6}, {0.5, 0.8}, {0.9, 0.95}}) ==
            Catch::Approx(0.7175).margin(1e-12));
  }
  SECTION("too-short path is rejected") {
    REQUIRE_THROWS_AS(selection_auc(P{{0.5, 0.5}}), EmptyPathError);
  }
}

TEST_CASE("centroid helpers") {
  DenseMatrix a(4, 2);
  a(0, 0) = 0.0;
  a(1, 0) = 2.0;
  a(2, 0) = 10.0;
  a(3, 0) = 12.0;
  const std::vector<std::size_t> labels{0, 0, 1, 1};
  const DenseMatrix c = row_cluster_centroids(a, labels);
  REQUIRE(c(0, 0) == 1.0);
  REQUIRE(c(1, 0) == 11.0);

  DenseMatrix probe(2, 2);
  probe(0, 0) = 3.0;
  probe(1, 0) = 9.0;
  REQUIRE(nearest_centroid_assign(probe, c) ==
          std::vector<std::size_t>{0, 1});
}
