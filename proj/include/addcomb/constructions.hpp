#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "addcomb/budgets.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/group.hpp"
#include "addcomb/quantities.hpp"
#include "addcomb/rng.hpp"
#include "addcomb/spectral.hpp"

namespace addcomb {

enum class SetKind {
    Explicit,
    Subgroup,
    RandomInSubgroup,
    HPlusLambda,
    QuadraticResidues,
    Progression,
    Random,
};

inline const char* set_kind_name(SetKind k) {
    switch (k) {
        case SetKind::Explicit: return "explicit";
        case SetKind::Subgroup: return "subgroup";
        case SetKind::RandomInSubgroup: return "random_in_subgroup";
        case SetKind::HPlusLambda: return "h_plus_lambda";
        case SetKind::QuadraticResidues: return "quadratic_residues";
        case SetKind::Progression: return "progression";
        case SetKind::Random: return "random";
    }
    return "?";
}

inline SetKind set_kind_from_name(const std::string& s) {
    for (SetKind k : {SetKind::Explicit, SetKind::Subgroup, SetKind::RandomInSubgroup,
                      SetKind::HPlusLambda, SetKind::QuadraticResidues, SetKind::Progression,
                      SetKind::Random})
        if (s == set_kind_name(k)) return k;
    throw validation_error("unknown set kind: " + s);
}

/// A deterministic recipe for a subset: identical SetSpec (seed included)
/// always builds the identical GroupSubset. Random kinds draw from a
/// SplitMix64 stream split by the kind name.
struct SetSpec {
    SetKind kind = SetKind::Explicit;
    std::vector<std::int64_t> elements;    // explicit
    std::vector<std::int64_t> generators;  // subgroup, random_in_subgroup
    double density = 0.5;                  // random_in_subgroup, random
    std::int64_t count = -1;               // random: exact size (used when >= 0)
    int dim_h = 0;                         // h_plus_lambda
    int n_lambda = 0;                      // h_plus_lambda: |Lambda|
    std::int64_t start = 0;                // progression
    std::int64_t step = 1;                 // progression
    std::int64_t length = 0;               // progression
    std::uint64_t seed = 0;

    friend bool operator==(const SetSpec&, const SetSpec&) = default;
};

namespace detail {

/// Closure of the generators under the group law.
inline GroupSubset span(const GroupSpec& g, const std::vector<std::int64_t>& generators) {
    GroupSubset h(g);
    h.insert(0);
    std::vector<std::int64_t> frontier{0};
    while (!frontier.empty()) {
        std::vector<std::int64_t> next;
        for (auto x : frontier)
            for (auto v : generators) {
                const std::int64_t y = g.add(x, v);
                if (!h.contains(y)) {
                    h.insert(y);
                    next.push_back(y);
                }
            }
        frontier = std::move(next);
    }
    return h;
}

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace detail

/// Builds the subset a SetSpec describes.
inline GroupSubset build(const SetSpec& spec, const GroupSpec& g,
                         const Budgets& budgets = default_budgets()) {
    (void)budgets;
    switch (spec.kind) {
        case SetKind::Explicit: {
            return GroupSubset::from_indices(g, spec.elements);
        }
        case SetKind::Subgroup: {
            for (auto v : spec.generators)
                if (v < 0 || v >= g.size()) throw validation_error("generator index out of range");
            return detail::span(g, spec.generators);
        }
        case SetKind::RandomInSubgroup: {
            const GroupSubset h = detail::span(g, spec.generators);
            SplitMix64 rng(split_stream(spec.seed, "random_in_subgroup"));
            GroupSubset out(g);
            for (auto x : h.indices())
                if (rng.bernoulli(spec.density)) out.insert(x);
            return out;
        }
        case SetKind::HPlusLambda: {
            if (!g.all_orders_two())
                throw validation_error("h_plus_lambda requires a group with all orders 2");
            if (spec.dim_h < 0 || spec.n_lambda < 1)
                throw validation_error("h_plus_lambda requires dim_h >= 0 and n_lambda >= 1");
            if (spec.dim_h + spec.n_lambda - 1 > g.rank())
                throw validation_error(
                    "h_plus_lambda: lambda representatives are not independent over H "
                    "(dim_h + n_lambda - 1 exceeds the rank)");
            std::vector<std::int64_t> h_gens;
            for (int j = 0; j < spec.dim_h; ++j) h_gens.push_back(g.unit(j));
            const GroupSubset h = detail::span(g, h_gens);
            std::vector<std::int64_t> lambda{0};
            for (int j = 0; j < spec.n_lambda - 1; ++j)
                lambda.push_back(g.unit(spec.dim_h + j));
            GroupSubset out(g);
            for (auto l : lambda)
                for (auto x : h.indices()) out.insert(g.add(x, l));
            if (out.size() != h.size() * static_cast<std::int64_t>(lambda.size()))
                throw validation_error("h_plus_lambda: cosets collide");
            return out;
        }
        case SetKind::QuadraticResidues: {
            if (g.rank() != 1 || !detail::is_prime(g.size()))
                throw validation_error("quadratic_residues requires Z/p with p prime");
            const std::int64_t p = g.size();
            GroupSubset out(g);
            for (std::int64_t x = 1; x < p; ++x) out.insert((x * x) % p);
            return out;
        }
        case SetKind::Progression: {
            if (spec.length < 1) throw validation_error("progression length must be >= 1");
            GroupSubset out(g);
            std::int64_t x = spec.start;
            if (x < 0 || x >= g.size()) throw validation_error("progression start out of range");
            if (spec.step < 0 || spec.step >= g.size())
                throw validation_error("progression step out of range");
            for (std::int64_t j = 0; j < spec.length; ++j) {
                out.insert(x);
                x = g.add(x, spec.step);
            }
            return out;
        }
        case SetKind::Random: {
            SplitMix64 rng(split_stream(spec.seed, "random"));
            GroupSubset out(g);
            if (spec.count >= 0) {
                if (spec.count > g.size())
                    throw validation_error("random set size exceeds the group size");
                while (out.size() < spec.count)
                    out.insert(static_cast<std::int64_t>(
                        rng.below(static_cast<std::uint64_t>(g.size()))));
            } else {
                for (std::int64_t x = 0; x < g.size(); ++x)
                    if (rng.bernoulli(spec.density)) out.insert(x);
            }
            return out;
        }
    }
    throw validation_error("unknown set kind");
}

/// f = A - |A|/N: the indicator with its mean removed, so fhat(0) = 0 and
/// fhat agrees with Ahat away from 0.
inline DenseFunction balanced_function(const GroupSubset& a) {
    if (a.empty()) throw validation_error("balanced function requires a nonempty set");
    const double mean =
        static_cast<double>(a.size()) / static_cast<double>(a.group().size());
    std::vector<cplx> v(static_cast<std::size_t>(a.group().size()), cplx{-mean, 0.0});
    for (auto i : a.indices()) v[static_cast<std::size_t>(i)] = cplx{1.0 - mean, 0.0};
    return DenseFunction(a.group(), std::move(v), false);
}

struct HillClimbResult {
    GroupSubset best;
    std::vector<double> trace;  // objective after each iteration; nondecreasing
};

namespace detail {

/// Ratio objectives for the tightness search. Both normalize the law's two
/// sides so that 1.0 marks the extremal configuration.
inline double tightness_objective(const std::string& name, const GroupSubset& a,
                                  const Budgets& budgets) {
    const double card = static_cast<double>(a.size());
    if (name == "cor" || name == "theorem_cor") {
        // M^2 rho K / |A|^3
        const double m = fourier_bias(a, budgets);
        const double r = static_cast<double>(rho(a, budgets));
        const double k = static_cast<double>(sumset(a, a, -1, budgets).size()) / card;
        return m * m * r * k / (card * card * card);
    }
    if (name == "energy" || name == "theorem_energy") {
        // rho^7 M^4 log^7|A| K^7 / |A|^11 with K = |A|^3 / E(A)
        const double m = fourier_bias(a, budgets);
        const double r = static_cast<double>(rho(a, budgets));
        const double e = static_cast<double>(energy(a, a, budgets));
        const double k = card * card * card / e;
        const double l = std::log(card);
        return std::pow(r, 7.0) * std::pow(m, 4.0) * std::pow(l, 7.0) * std::pow(k, 7.0) /
               std::pow(card, 11.0);
    }
    throw validation_error("unknown hill-climb objective: " + name);
}

}  // namespace detail

/// Greedy single-swap search for near-extremal sets of a fixed size.
/// Deterministic in the seed; the returned trace is nondecreasing and starts
/// at the seeded set's objective.
inline HillClimbResult hill_climb_tightness(const GroupSpec& g, std::int64_t target_size,
                                            const std::string& objective, std::uint64_t seed,
                                            int iterations,
                                            const Budgets& budgets = default_budgets()) {
    if (target_size < 2 || target_size > g.size())
        throw validation_error("hill climb target size out of range");
    // validate the objective before any work
    {
        GroupSubset probe(g);
        probe.insert(0);
        probe.insert(1 % g.size());
        (void)detail::tightness_objective(objective, probe, budgets);
    }

    SplitMix64 rng(split_stream(seed, "hill_climb"));
    GroupSubset current(g);
    while (current.size() < target_size)
        current.insert(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(g.size()))));

    double value = detail::tightness_objective(objective, current, budgets);
    HillClimbResult result{current, {value}};

    for (int it = 0; it < iterations; ++it) {
        const auto members = current.indices();
        const std::int64_t out_el = members[rng.below(members.size())];
        std::int64_t in_el =
            static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(g.size())));
        if (!current.contains(in_el)) {
            GroupSubset candidate = current;
            candidate.erase(out_el);
            candidate.insert(in_el);
            const double cand_value = detail::tightness_objective(objective, candidate, budgets);
            if (cand_value > value) {
                current = std::move(candidate);
                value = cand_value;
            }
        }
        result.trace.push_back(value);
    }
    result.best = current;
    return result;
}

}  // namespace addcomb
