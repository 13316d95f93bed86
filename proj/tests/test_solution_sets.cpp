#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morl/solution_set.hpp"

#include "support/oracles.hpp"

using namespace morl;

namespace {

SolutionSet make_set(const std::vector<ValueVector>& values) {
    SolutionSet s;
    for (std::size_t i = 0; i < values.size(); ++i) s.add("p" + std::to_string(i), values[i]);
    return s;
}

std::vector<ValueVector> sorted_values(const SolutionSet& s) {
    auto v = s.values();
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("pareto_dominates basics") {
    CHECK(pareto_dominates({2, 3}, {1, 3}));
    CHECK_FALSE(pareto_dominates({2, 3}, {2, 3}));
    CHECK_FALSE(pareto_dominates({1, 5}, {5, 1}));
    CHECK_FALSE(pareto_dominates({5, 1}, {1, 5}));
    CHECK_THROWS_AS(pareto_dominates({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("pareto_dominates is irreflexive, asymmetric and transitive") {
    Rng rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        ValueVector a(3), b(3), c(3);
        for (int i = 0; i < 3; ++i) {
            // coarse values make dominance relations common
            a[static_cast<std::size_t>(i)] = std::floor(rng.uniform(0, 4));
            b[static_cast<std::size_t>(i)] = std::floor(rng.uniform(0, 4));
            c[static_cast<std::size_t>(i)] = std::floor(rng.uniform(0, 4));
        }
        CHECK_FALSE(pareto_dominates(a, a));
        if (pareto_dominates(a, b)) CHECK_FALSE(pareto_dominates(b, a));
        if (pareto_dominates(a, b) && pareto_dominates(b, c)) CHECK(pareto_dominates(a, c));
    }
}

TEST_CASE("pareto_prune examples") {
    SolutionSet pruned = pareto_prune(make_set({{1, 2}, {2, 1}, {0, 0}}));
    CHECK(pruned.size() == 2);
    CHECK(pruned.contains_value({1, 2}));
    CHECK(pruned.contains_value({2, 1}));
    CHECK(pruned.pruning_state == PruningState::pareto_pruned);

    CHECK(pareto_prune(make_set({{1, 1}})).size() == 1);
    CHECK(pareto_prune(SolutionSet{}).empty());
}

TEST_CASE("pareto_prune collapses duplicates to the first inserted") {
    SolutionSet s;
    s.add("b", {1, 1});
    s.add("a", {1, 1});
    SolutionSet pruned = pareto_prune(s);
    REQUIRE(pruned.size() == 1);
    CHECK(pruned.entries[0].policy_id == "b");
}

TEST_CASE("pareto_prune matches the all-pairs oracle on random sets") {
    Rng rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.below(200);
        const std::size_t d = trial % 2 == 0 ? 2 : (trial % 3 == 0 ? 5 : 3);
        SolutionSet s = oracles::random_set(rng, n, d);
        // sprinkle duplicates and dominated copies
        if (n > 3) {
            s.entries[1].value = s.entries[0].value;
            s.entries[2].value = s.entries[0].value;
            for (auto& x : s.entries[2].value) x -= 0.25;
        }
        auto expected = oracles::brute_force_pareto(s.values());
        std::sort(expected.begin(), expected.end());
        CHECK(sorted_values(pareto_prune(s)) == expected);
    }
}

TEST_CASE("ccs_prune drops concave points and keeps convex ones") {
    SolutionSet dropped = ccs_prune(make_set({{1, 0}, {0, 1}, {0.4, 0.4}}));
    CHECK(dropped.size() == 2);
    CHECK_FALSE(dropped.contains_value({0.4, 0.4}));
    CHECK(dropped.pruning_state == PruningState::ccs_pruned);

    SolutionSet kept = ccs_prune(make_set({{1, 0}, {0, 1}, {0.6, 0.6}}));
    CHECK(kept.size() == 3);

    CHECK(ccs_prune(make_set({{1, 1}})).size() == 1);
    CHECK(ccs_prune(SolutionSet{}).empty());
}

TEST_CASE("ccs_prune keeps value-identical entries by lowest policy_id") {
    SolutionSet s;
    s.add("z", {1, 0});
    s.add("a", {1, 0});
    s.add("m", {0, 1});
    SolutionSet pruned = ccs_prune(s);
    REQUIRE(pruned.size() == 2);
    CHECK(pruned.entries[0].policy_id == "a");
}

TEST_CASE("ccs_prune preserves scalarised maxima over the standard grid") {
    Rng rng(11);
    const auto grid = simplex_weight_grid(2, 200);
    for (int trial = 0; trial < 40; ++trial) {
        SolutionSet s = oracles::random_set(rng, 2 + rng.below(60), 2);
        SolutionSet pruned = ccs_prune(s);
        SolutionSet front = pareto_prune(s);
        for (const auto& w : grid)
            CHECK(std::abs(scalarised_max(pruned, w) - scalarised_max(s, w)) <= 1e-9);
        for (const auto& e : pruned.entries) CHECK(front.contains_value(e.value));
    }
}

TEST_CASE("ccs_prune in three objectives: grid preservation and subset rule") {
    Rng rng(13);
    const auto grid = simplex_weight_grid(3, 40);
    for (int trial = 0; trial < 10; ++trial) {
        SolutionSet s = oracles::random_set(rng, 2 + rng.below(40), 3);
        SolutionSet pruned = ccs_prune(s);
        SolutionSet front = pareto_prune(s);
        CHECK(pruned.size() <= front.size());
        for (const auto& w : grid)
            CHECK(std::abs(scalarised_max(pruned, w) - scalarised_max(s, w)) <= 1e-9);
        for (const auto& e : pruned.entries) CHECK(front.contains_value(e.value));
    }
}

TEST_CASE("ccs_prune removes mixture-dominated points in three objectives") {
    // (0.5, 0.5, 0.5) is the midpoint of the other two: never uniquely best
    SolutionSet s = make_set({{1, 0, 1}, {0, 1, 0}, {0.5, 0.5, 0.5}});
    SolutionSet pruned = ccs_prune(s);
    CHECK(pruned.size() == 2);
    CHECK_FALSE(pruned.contains_value({0.5, 0.5, 0.5}));
}

TEST_CASE("linear_utility examples") {
    CHECK(linear_utility(WeightVector({0.5, 0.5}), {2, 4}) == doctest::Approx(3.0));
    CHECK(linear_utility(WeightVector({1, 0}), {2, 4}) == doctest::Approx(2.0));
    CHECK(linear_utility(WeightVector({0.2, 0.8}), {10, 0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(WeightVector({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({-0.5, 1.5}), std::invalid_argument);
}

TEST_CASE("lorenz_vector examples") {
    CHECK(lorenz_vector({3, 1, 2}) == ValueVector{1, 3, 6});
    CHECK(lorenz_vector({5, 5}) == ValueVector{5, 10});
    CHECK(lorenz_vector({1, 2, 3}) == ValueVector{1, 3, 6}); // sorted input is a fixed point
}

TEST_CASE("lorenz_dominates examples and permutation invariance") {
    CHECK(lorenz_dominates({2, 2}, {3, 1}));
    CHECK_FALSE(lorenz_dominates({1, 2}, {1, 2}));
    CHECK_FALSE(lorenz_dominates({4, 0}, {2, 2}));
    CHECK(lorenz_dominates({2, 2}, {4, 0}));

    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        ValueVector a(3), b(3);
        for (auto& x : a) x = std::floor(rng.uniform(0, 5));
        for (auto& x : b) x = std::floor(rng.uniform(0, 5));
        ValueVector shuffled = a;
        std::swap(shuffled[0], shuffled[2]);
        std::swap(shuffled[1], shuffled[0]);
        CHECK(lorenz_dominates(a, b) == lorenz_dominates(shuffled, b));
    }
}

TEST_CASE("mixture_value examples") {
    CHECK(mixture_value({{{1, 0}, 0.5}, {{0, 1}, 0.5}}) == ValueVector{0.5, 0.5});
    CHECK(mixture_value({{{3, 7}, 1.0}}) == ValueVector{3, 7});
    CHECK(mixture_value({{{2, 0}, 0.25}, {{0, 2}, 0.75}}) == ValueVector{0.5, 1.5});
    CHECK_THROWS_AS(mixture_value({{{1, 0}, 0.4}, {{0, 1}, 0.4}}), std::invalid_argument);
}

TEST_CASE("mixtures of weight-adjacent CCS vectors are non-dominated in the raw set") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        SolutionSet s = oracles::random_set(rng, 3 + rng.below(40), 2);
        SolutionSet ccs = ccs_prune(s);
        if (ccs.size() < 2) continue;
        auto pts = ccs.values();
        std::sort(pts.begin(), pts.end()); // ascending objective 0 = weight order
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const ValueVector mid = mixture_value({{pts[i], 0.5}, {pts[i + 1], 0.5}});
            for (const auto& e : s.entries) CHECK_FALSE(pareto_dominates(e.value, mid));
        }
    }
}
