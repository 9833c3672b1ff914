#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "addcomb/budgets.hpp"
#include "addcomb/constructions.hpp"
#include "addcomb/errors.hpp"
#include "addcomb/group.hpp"
#include "addcomb/quantities.hpp"
#include "addcomb/rng.hpp"
#include "addcomb/spectral.hpp"

namespace addcomb {

enum class Verdict { Holds, Fails, ReportOnly, PreconditionUnmet };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::ReportOnly: return "report-only";
        case Verdict::PreconditionUnmet: return "precondition-unmet";
    }
    return "?";
}

struct Precondition {
    std::string name;
    double value = 0.0;
    int holds = -1;  // 1 satisfied, 0 violated, -1 informational only
};

/// The evaluation record of one identity or inequality: both sides, the
/// precondition status and the verdict. Laws whose statement hides an
/// absolute constant are permanently "report-only" and the ratio carries the
/// information.
struct LawReport {
    std::string law;
    std::string digest;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::vector<Precondition> preconditions;
    Verdict verdict = Verdict::ReportOnly;
    bool vacuous = false;  // rhs <= 0 made a "holds" verdict empty
    double wall_time_ms = 0.0;
    std::map<std::string, double> extras;
};

namespace detail {

class LawTimer {
public:
    explicit LawTimer(LawReport& r) : report_(&r), start_(std::chrono::steady_clock::now()) {}
    ~LawTimer() {
        const auto end = std::chrono::steady_clock::now();
        report_->wall_time_ms =
            std::chrono::duration<double, std::milli>(end - start_).count();
    }

private:
    LawReport* report_;
    std::chrono::steady_clock::time_point start_;
};

inline double safe_ratio(double lhs, double rhs) {
    if (rhs == 0.0) return lhs == 0.0 ? 1.0 : 1e300;
    return lhs / rhs;
}

/// ln(x)/ln|A| with the |A| <= 1 degeneracy pushed to a huge sentinel
/// instead of infinity, so reports stay finite.
inline double log_ratio(double x, double log_card) {
    if (log_card <= 0.0) return x > 1.0 ? 1e300 : (x == 1.0 ? 0.0 : -1e300);
    return std::log(x) / log_card;
}

/// Verdict for lhs >= rhs with the spectral tolerance; rhs <= 0 is a vacuous
/// hold (the rhs is reported signed, never clamped).
inline void set_ge_verdict(LawReport& r, bool preconditions_ok) {
    if (!preconditions_ok) {
        r.verdict = Verdict::PreconditionUnmet;
        return;
    }
    const double scale = std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
    if (r.lhs >= r.rhs - 1e-9 * scale) {
        r.verdict = Verdict::Holds;
        r.vacuous = r.rhs <= 0.0;
    } else {
        r.verdict = Verdict::Fails;
    }
}

inline std::string size_digest(const GroupSubset& a) {
    return "group=" + a.group().name() + ";|A|=" + std::to_string(a.size());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Identities and inclusions

/// |supp f| * |supp fhat| >= N for every nonzero f; support is thresholded at
/// 1e-9 of each array's sup norm.
inline LawReport check_support_uncertainty(const DenseFunction& f,
                                           const Budgets& budgets = default_budgets()) {
    LawReport r;
    detail::LawTimer timer(r);
    r.law = "support_uncertainty";
    r.digest = "group=" + f.group().name();
    if (f.norm_inf() == 0.0) throw validation_error("support uncertainty needs a nonzero function");
    const std::int64_t supp_f = f.support_size(1e-9);
    const std::int64_t supp_fhat = dft(f, DftPath::Auto, budgets).support_size(1e-9);
    r.lhs = static_cast<double>(supp_f) * static_cast<double>(supp_fhat);
    r.rhs = static_cast<double>(f.group().size());
    r.ratio = detail::safe_ratio(r.lhs, r.rhs);
    r.extras["supp_f"] = static_cast<double>(supp_f);
    r.extras["supp_fhat"] = static_cast<double>(supp_fhat);
    detail::set_ge_verdict(r, true);
    return r;
}

/// sum_x (A^(k)(x))^l = T_{k/2}(R^(l)_A), exactly (k even). The right side
/// takes the correlation power over the product group G^(l-1).
inline LawReport check_lemma1(const GroupSubset& a, int k, int l,
                              const Budgets& budgets = default_budgets()) {
    if (k < 2 || k % 2 != 0) throw validation_error("lemma 1 requires even k >= 2");
    if (l < 2) throw validation_error("lemma 1 requires l >= 2");
    LawReport r;
    detail::LawTimer timer(r);
    r.law = "lemma1_moment_identity";
    r.digest = detail::size_digest(a) + ";k=" + std::to_string(k) + ";l=" + std::to_string(l);

    const DenseFunction power = conv_power(a.indicator(), k, budgets);
    __int128 lhs = 0;
    for (std::int64_t x = 0; x < power.size(); ++x)
        lhs += detail::pow_checked(power.integer_at(x), l, "lemma1");
    const std::int64_t lhs_int = detail::narrow_count(lhs, "lemma1");

    const DenseFunction rep = representation_fn(a, l, budgets);
    const std::int64_t rhs_int = t_k_fn_exact(rep, k / 2, budgets);

    r.lhs = static_cast<double>(lhs_int);
    r.rhs = static_cast<double>(rhs_int);
    r.ratio = detail::safe_ratio(r.lhs, r.rhs);
    r.verdict = (lhs_int == rhs_int) ? Verdict::Holds : Verdict::Fails;
    return r;
}

/// |W x X| |Y - Delta_{k2}(Z)| <= |W x Y x Z - Delta_{k1+k2+1}(X)|, exactly.
inline LawReport check_lemma2(const TupleSet& w, const GroupSubset& x, const TupleSet& y,
                              const GroupSubset& z, const Budgets& budgets = default_budgets()) {
    require_same_group(w.group(), x.group());
    require_same_group(y.group(), z.group());
    require_same_group(w.group(), y.group());
    LawReport r;
    detail::LawTimer timer(r);
    r.law = "lemma2_triangle";
    r.digest = "group=" + w.group().name() + ";k1=" + std::to_string(w.arity()) +
               ";k2=" + std::to_string(y.arity());

    const TupleSet y_diff = tuple_diff(y, z, budgets);
    const __int128 lhs =
        static_cast<__int128>(w.size()) * x.size() * y_diff.size();

    const TupleSet wyz = w.cartesian(y).cartesian(TupleSet::from_subset(z, budgets.max_tuples));
    const TupleSet rhs_set = tuple_diff(wyz, x, budgets);

    r.lhs = static_cast<double>(static_cast<std::int64_t>(lhs));
    r.rhs = static_cast<double>(rhs_set.size());
    r.ratio = detail::safe_ratio(r.lhs, r.rhs);
    r.verdict = (lhs <= static_cast<__int128>(rhs_set.size())) ? Verdict::Holds : Verdict::Fails;
    return r;
}

/// B + A_x is contained in (A+B) intersect (A+B+x), as an exact subset test.
inline LawReport check_katz_koester(const GroupSubset& a, const GroupSubset& b, std::int64_t x,
                                    const Budgets& budgets = default_budgets()) {
    require_same_group(a.group(), b.group());
    LawReport r;
    detail::LawTimer timer(r);
    r.law = "katz_koester_inclusion";
    r.digest = detail::size_digest(a) + ";|B|=" + std::to_string(b.size()) +
               ";x=" + std::to_string(x);

    const GroupSubset a_x = a.intersect(translate(a, x));
    GroupSubset lhs_set(a.group());
    if (!a_x.empty() && !b.empty()) lhs_set = sumset(b, a_x, +1, budgets);
    const GroupSubset s = sumset(a, b, +1, budgets);
    const GroupSubset rhs_set = s.intersect(translate(s, x));

    r.lhs = static_cast<double>(lhs_set.size());
    r.rhs = static_cast<double>(rhs_set.size());
    r.ratio = detail::safe_ratio(r.lhs, r.rhs);
    r.verdict = lhs_set.subset_of(rhs_set) ? Verdict::Holds : Verdict::Fails;
    return r;
}

// ---------------------------------------------------------------------------
// Theorem context

/// Scalars shared by the main-theorem evaluations. n (= m) is the internal
/// tower height [log_K |A| / 2]; K = 1 makes the log base degenerate,
/// recorded as 0.
struct TheoremContext {
    std::int64_t card_a = 0, card_b = 0, card_d = 0, card_bb = 0, card_s = 0, group_n = 0;
    double delta = 0, zeta = 0, k = 0, k_star = 0, omega = 0, kappa = 0, kappa_star = 0;
    double log_card = 0;  // L = log |A|, natural base
    std::int64_t rho_a = 0;
    int n_param = 0;  // = m; 0 when K = 1
};

inline TheoremContext make_theorem_context(const GroupSubset& a, const GroupSubset& b,
                                           const Budgets& budgets = default_budgets()) {
    if (a.empty() || b.empty()) throw validation_error("theorem context requires nonempty sets");
    require_same_group(a.group(), b.group());
    TheoremContext c;
    c.card_a = a.size();
    c.card_b = b.size();
    c.group_n = a.group().size();
    const GroupSubset d = sumset(a, a, -1, budgets);
    const GroupSubset bb = sumset(b, b, -1, budgets);
    const GroupSubset s = sumset(a, b, +1, budgets);
    c.card_d = d.size();
    c.card_bb = bb.size();
    c.card_s = s.size();
    c.delta = static_cast<double>(c.card_a) / static_cast<double>(c.group_n);
    c.zeta = static_cast<double>(c.card_b) / static_cast<double>(c.card_a);
    c.k = static_cast<double>(c.card_d) / static_cast<double>(c.card_a);
    c.k_star = static_cast<double>(c.card_bb) / static_cast<double>(c.card_b);
    c.omega = static_cast<double>(c.card_s) / static_cast<double>(c.card_d);
    c.kappa = c.k * c.delta * c.omega;
    c.rho_a = rho(a, budgets);
    c.kappa_star = c.delta * c.k * c.k * static_cast<double>(c.rho_a) /
                   static_cast<double>(c.card_a);
    c.log_card = std::log(static_cast<double>(c.card_a));
    if (c.k > 1.0 && c.log_card > 0.0)
        c.n_param = static_cast<int>(std::floor(0.5 * c.log_card / std::log(c.k)));
    return c;
}

// ---------------------------------------------------------------------------
// Main theorems

/// The two asymmetric uncertainty bounds:
///   report 1:  M^2(B) rho(A) >= (|A|^2 |B|^2 / |A+B|) * (1 - 6 log K log(zeta K K*) / log|A| - (omega K)^2 delta)
///   report 2:  M(A-A) rho^2(A) >= (|A|^3 / K) * (1 - 16 log^2(2K) / log|A| - K^3 delta)
/// under the precondition |A| >= (2K max{1, omega})^8. The log-product error
/// term is clamped at 0 from below; the rhs itself is never clamped and a
/// nonpositive rhs yields a vacuous hold.
inline std::pair<LawReport, LawReport> eval_theorem_main(
    const GroupSubset& a, const GroupSubset& b, const Budgets& budgets = default_budgets()) {
    if (a.empty() || b.empty()) throw validation_error("theorem main requires nonempty sets");
    const TheoremContext c = make_theorem_context(a, b, budgets);

    LawReport r1;
    {
        detail::LawTimer timer(r1);
        r1.law = "main_asymmetric";
        r1.digest = detail::size_digest(a) + ";|B|=" + std::to_string(b.size());

        const double m_b = fourier_bias(b, budgets);
        r1.lhs = m_b * m_b * static_cast<double>(c.rho_a);

        const double main_term = static_cast<double>(c.card_a) * c.card_a * c.card_b * c.card_b /
                                 static_cast<double>(c.card_s);
        const double log_term =
            std::max(0.0, 6.0 * std::log(c.k) *
                              detail::log_ratio(c.zeta * c.k * c.k_star, c.log_card));
        const double bracket = 1.0 - log_term - (c.omega * c.k) * (c.omega * c.k) * c.delta;
        r1.rhs = main_term * bracket;
        r1.ratio = detail::safe_ratio(r1.lhs, r1.rhs);

        const double threshold = std::pow(2.0 * c.k * std::max(1.0, c.omega), 8.0);
        const bool pre = static_cast<double>(c.card_a) >= threshold;
        r1.preconditions.push_back({"card_A >= (2K max(1,omega))^8", threshold, pre ? 1 : 0});
        r1.extras["M_B"] = m_b;
        r1.extras["rho_A"] = static_cast<double>(c.rho_a);
        r1.extras["K"] = c.k;
        r1.extras["K_star"] = c.k_star;
        r1.extras["zeta"] = c.zeta;
        r1.extras["omega"] = c.omega;
        r1.extras["delta"] = c.delta;
        r1.extras["main_term"] = main_term;
        r1.extras["error_factor"] = bracket;
        detail::set_ge_verdict(r1, pre);
    }

    LawReport r2;
    {
        detail::LawTimer timer(r2);
        r2.law = "main_difference_set";
        r2.digest = detail::size_digest(a);

        const GroupSubset d = sumset(a, a, -1, budgets);
        const double m_d = fourier_bias(d, budgets);
        r2.lhs = m_d * static_cast<double>(c.rho_a) * static_cast<double>(c.rho_a);

        const double log2k = std::log(2.0 * c.k);
        const double bracket =
            1.0 - 16.0 * log2k * detail::log_ratio(2.0 * c.k, c.log_card) -
            c.k * c.k * c.k * c.delta;
        const double main_term = static_cast<double>(c.card_a) * c.card_a * c.card_a / c.k;
        r2.rhs = main_term * bracket;
        r2.ratio = detail::safe_ratio(r2.lhs, r2.rhs);
        r2.extras["main_term"] = main_term;

        const double threshold = std::pow(2.0 * c.k * std::max(1.0, c.omega), 8.0);
        const bool pre = static_cast<double>(c.card_a) >= threshold;
        r2.preconditions.push_back({"card_A >= (2K max(1,omega))^8", threshold, pre ? 1 : 0});
        r2.extras["M_D"] = m_d;
        r2.extras["rho_A"] = static_cast<double>(c.rho_a);
        r2.extras["K"] = c.k;
        r2.extras["error_factor"] = bracket;
        detail::set_ge_verdict(r2, pre);
    }
    return {r1, r2};
}

/// The symmetric corollary M^2(A) rho(A) >= (|A|^3 / K)(1 - o(1)): the o(1)
/// has no finite-size constant, so the verdict is always report-only and the
/// headline number is ratio = lhs K / |A|^3. The asymptotic conditions are
/// reported as their finite values.
inline LawReport eval_theorem_cor(const GroupSubset& a,
                                  const Budgets& budgets = default_budgets()) {
    if (a.empty()) throw validation_error("theorem cor requires a nonempty set");
    LawReport r;
    detail::LawTimer timer(r);
    r.law = "cor_symmetric";
    r.digest = detail::size_digest(a);

    const GroupSubset d = sumset(a, a, -1, budgets);
    const double card = static_cast<double>(a.size());
    const double k = static_cast<double>(d.size()) / card;
    const double delta = card / static_cast<double>(a.group().size());
    const double m = fourier_bias(a, budgets);
    const std::int64_t r_a = rho(a, budgets);

    r.lhs = m * m * static_cast<double>(r_a);
    r.rhs = card * card * card / k;
    r.ratio = r.lhs * k / (card * card * card);
    r.extras["M"] = m;
    r.extras["rho"] = static_cast<double>(r_a);
    r.extras["K"] = k;
    r.preconditions.push_back({"K^2 delta (wants o(1))", k * k * delta, -1});
    r.preconditions.push_back(
        {"log^2 K / log|A| (wants o(1))",
         card > 1.0 ? std::log(k) * std::log(k) / std::log(card) : 1e300, -1});
    r.verdict = Verdict::ReportOnly;
    return r;
}

/// M^{2(l-1)}(A) rho_l(A) against (|A|^{2l-1} / K^{l-1}) (1 - 2l^2/sqrt|A|)
/// (1 - 12(l-1) log^2 K / log|A| - K^2 delta)^{l-1}.
inline LawReport eval_theorem_l(const GroupSubset& a, int l,
                                const Budgets& budgets = default_budgets()) {
    if (l < 2) throw validation_error("theorem l requires l >= 2");
    if (a.empty()) throw validation_error("theorem l requires a nonempty set");
    LawReport r;
    detail::LawTimer timer(r);
    r.law = "rho_l_bound";
    r.digest = detail::size_digest(a) + ";l=" + std::to_string(l);

    const GroupSubset d = sumset(a, a, -1, budgets);
    const double card = static_cast<double>(a.size());
    const double k = static_cast<double>(d.size()) / card;
    const double delta = card / static_cast<double>(a.group().size());
    const double m = fourier_bias(a, budgets);
    const std::int64_t rl = rho_l(a, l, budgets);
    const double log_card = std::log(card);

    r.lhs = std::pow(m, 2.0 * (l - 1)) * static_cast<double>(rl);
    const double main_term = std::pow(card, 2.0 * l - 1.0) / std::pow(k, l - 1.0);
    const double factor1 = 1.0 - 2.0 * l * l / std::sqrt(card);
    const double base = 1.0 - 12.0 * (l - 1) * std::log(k) * detail::log_ratio(k, log_card) -
                        k * k * delta;
    r.rhs = main_term * factor1 * std::pow(base, l - 1);
    r.ratio = detail::safe_ratio(r.lhs, r.rhs);

    const double size_threshold = std::pow(k, 8.0 * (l - 1));
    const double l4_threshold = 4.0 * std::pow(static_cast<double>(l), 4.0);
    const bool pre1 = card >= size_threshold;
    const bool pre2 = card > l4_threshold;
    r.preconditions.push_back({"card_A >= K^(8(l-1))", size_threshold, pre1 ? 1 : 0});
    r.preconditions.push_back({"card_A > 4 l^4", l4_threshold, pre2 ? 1 : 0});
    r.extras["M"] = m;
    r.extras["rho_l"] = static_cast<double>(rl);
    r.extras["K"] = k;
    r.extras["error_factor_sqrt"] = factor1;
    r.extras["error_factor_base"] = base;
    detail::set_ge_verdict(r, pre1 && pre2);
    return r;
}

/// M^2(A) rho^(k)(A) against (|A|^{k+1} / K)(1 - 14 log^2 K* / log|A| -
/// delta K K*) for k = 2s, with K = |sA +/- A| / |A| evaluated for both
/// signs (first = plus, second = minus) and K* = |sA - sA| / |A|. The
/// precondition parameter n is self-referential and is iterated to its
/// fixed point. The exact Cauchy-Schwarz floor
/// |A|^{k+2} <= |sA +/- A| (rho^(k) |A|^2 + T_s |A|) is checked alongside,
/// and the diagnostic ratio rho^(k) |sA-sA| / (2 |A|^k) is reported.
inline std::pair<LawReport, LawReport> eval_theorem_k(const GroupSubset& a, int s,
                                                      const Budgets& budgets = default_budgets()) {
    if (s < 1) throw validation_error("theorem k requires s >= 1");
    if (a.empty()) throw validation_error("theorem k requires a nonempty set");
    const int k = 2 * s;

    const double card = static_cast<double>(a.size());
    const double delta = card / static_cast<double>(a.group().size());
    const double log_card = std::log(card);
    const double m = fourier_bias(a, budgets);
    const std::int64_t rk = rho_k(a, k, budgets);
    const std::int64_t ts = (s == 1) ? a.size() : t_k_count(a, s, budgets);
    const double log_ts = std::log(static_cast<double>(ts));

    const GroupSubset sa = iterated_sumset(a, s, 0, budgets);
    const GroupSubset sd = sumset(sa, sa, -1, budgets);
    const double k_star = static_cast<double>(sd.size()) / card;
    const double log_k_star = std::log(k_star);

    // n = [ (1/2) log_{K*} (|A|^{nk-n+1} T_s^{-n}) ], iterated from 2 to a
    // fixed point; K* = 1 leaves the base degenerate (precondition trivially
    // satisfied, since eps_n >= |sA|^n / |sD|^n = 1).
    int n_param = 2;
    bool degenerate = k_star <= 1.0;
    if (!degenerate) {
        for (int iter = 0; iter < 64; ++iter) {
            const double target =
                ((static_cast<double>(n_param) * k - n_param + 1) * log_card -
                 n_param * log_ts) /
                (2.0 * log_k_star);
            const int next = std::max(2, static_cast<int>(std::floor(target)));
            if (next == n_param) break;
            n_param = next;
        }
    }

    auto build = [&](const GroupSubset& q, const char* tag) {
        LawReport r;
        detail::LawTimer timer(r);
        r.law = std::string("rho_k_bound_") + tag;
        r.digest = detail::size_digest(a) + ";s=" + std::to_string(s);
        const double kq = static_cast<double>(q.size()) / card;

        r.lhs = m * m * static_cast<double>(rk);
        const double bracket =
            1.0 - 14.0 * log_k_star * detail::log_ratio(k_star, log_card) -
            delta * kq * k_star;
        r.rhs = std::pow(card, k + 1.0) / kq * bracket;
        r.ratio = detail::safe_ratio(r.lhs, r.rhs);

        // precondition |A|^{nk-n+1} >= K*^8 T_s^n, in logs
        const double gap = (static_cast<double>(n_param) * k - n_param + 1) * log_card -
                           (8.0 * log_k_star + n_param * log_ts);
        const bool pre_size = degenerate || gap >= 0.0;
        r.preconditions.push_back({degenerate
                                       ? std::string("card_A^(nk-n+1) >= K*^8 T_s^n (degenerate K*=1)")
                                       : std::string("card_A^(nk-n+1) >= K*^8 T_s^n (log gap)"),
                                   degenerate ? 0.0 : gap, pre_size ? 1 : 0});
        const bool pre_card = a.size() > 4;
        r.preconditions.push_back({"card_A > 4", 4.0, pre_card ? 1 : 0});

        // exact floor from Cauchy-Schwarz: |Q| (rho^(k)|A|^2 + T_s|A|) >= |A|^(k+2)
        const __int128 floor_lhs =
            static_cast<__int128>(q.size()) *
            (static_cast<__int128>(rk) * a.size() * a.size() +
             static_cast<__int128>(ts) * a.size());
        const __int128 floor_rhs = detail::pow_checked(a.size(), k + 2, "rho_k floor");
        r.extras["trivial_bound_ok"] = (floor_lhs >= floor_rhs) ? 1.0 : 0.0;

        r.extras["M"] = m;
        r.extras["rho_k"] = static_cast<double>(rk);
        r.extras["K"] = kq;
        r.extras["K_star"] = k_star;
        r.extras["T_s"] = static_cast<double>(ts);
        r.extras["n"] = static_cast<double>(n_param);
        r.extras["error_factor"] = bracket;
        r.extras["rho_k_sds_ratio"] =
            static_cast<double>(rk) * static_cast<double>(sd.size()) /
            (2.0 * std::pow(card, static_cast<double>(k)));
        detail::set_ge_verdict(r, pre_size && pre_card);
        return r;
    };

    const GroupSubset q_plus = sumset(sa, a, +1, budgets);
    const GroupSubset q_minus = sumset(sa, a, -1, budgets);
    return {build(q_plus, "plus"), build(q_minus, "minus")};
}

/// rho^7(A) M^4(A) log^7|A| >> |A|^11 / K^7 with K = |A|^3 / E(A). The >>
/// hides an absolute constant, so this is always report-only; the stated
/// conditions are recorded as numbers.
inline LawReport eval_theorem_energy(const GroupSubset& a,
                                     const Budgets& budgets = default_budgets()) {
    if (a.empty()) throw validation_error("theorem energy requires a nonempty set");
    if (a.size() < 2) throw validation_error("theorem energy requires |A| >= 2");
    LawReport r;
    detail::LawTimer timer(r);
    r.law = "energy_uncertainty";
    r.digest = detail::size_digest(a);

    const double card = static_cast<double>(a.size());
    const double delta = card / static_cast<double>(a.group().size());
    const double e = static_cast<double>(energy(a, a, budgets));
    const double k = card * card * card / e;
    const double m = fourier_bias(a, budgets);
    const double rho_a = static_cast<double>(rho(a, budgets));
    const double l = std::log(card);

    r.lhs = std::pow(rho_a, 7.0) * std::pow(m, 4.0) * std::pow(l, 7.0);
    r.rhs = std::pow(card, 11.0) / std::pow(k, 7.0);
    r.ratio = detail::safe_ratio(r.lhs, r.rhs);
    r.extras["E"] = e;
    r.extras["K"] = k;
    r.extras["M"] = m;
    r.extras["rho"] = rho_a;
    r.preconditions.push_back({"card_A >= 8 K^3", 8.0 * k * k * k,
                               card >= 8.0 * k * k * k ? 1 : 0});
    r.preconditions.push_back({"delta^3 L^28 K^25 (wants << 1)",
                               std::pow(delta, 3.0) * std::pow(l, 28.0) * std::pow(k, 25.0), -1});
    r.verdict = Verdict::ReportOnly;
    return r;
}

enum class CounterexampleVariant { QuadraticResidues, RandomBalanced };

/// The balanced-function counterexample: for f = A - |A|/p on Z/p the general
/// bound max_{xi!=0}|fhat| * max_{x!=0}|f| * |supp f| >= ||f||_1^2 fails, and
/// the ratio lhs/rhs decays along growing p. Report-only by construction.
inline LawReport eval_remark_counterexample(std::int64_t p,
                                            CounterexampleVariant variant =
                                                CounterexampleVariant::QuadraticResidues,
                                            std::uint64_t seed = 0,
                                            const Budgets& budgets = default_budgets()) {
    if (!detail::is_prime(p)) throw validation_error("counterexample requires a prime p");
    if (p > budgets.max_group_size) throw size_error("p exceeds the configured maximum");
    LawReport r;
    detail::LawTimer timer(r);
    r.law = "balanced_counterexample";

    const GroupSpec g = make_group({p}, budgets.max_group_size);
    SetSpec spec;
    if (variant == CounterexampleVariant::QuadraticResidues) {
        spec.kind = SetKind::QuadraticResidues;
        r.digest = "p=" + std::to_string(p) + ";quadratic_residues";
    } else {
        spec.kind = SetKind::Random;
        spec.count = static_cast<std::int64_t>(
            std::ceil(std::pow(static_cast<double>(p), 0.75)));
        spec.seed = seed;
        r.digest = "p=" + std::to_string(p) + ";random;seed=" + std::to_string(seed);
    }
    const GroupSubset a = build(spec, g, budgets);
    const DenseFunction f = balanced_function(a);

    const Spectrum fhat = dft(f, DftPath::Auto, budgets);
    const double max_fhat = fhat.max_magnitude_excluding_zero();
    double max_f = 0.0;
    for (std::int64_t x = 1; x < p; ++x)
        max_f = std::max(max_f, std::abs(f.values()[static_cast<std::size_t>(x)]));
    const std::int64_t supp = f.support_size(1e-9);
    const double norm1 = f.norm1();

    r.lhs = max_fhat * max_f * static_cast<double>(supp);
    r.rhs = norm1 * norm1;
    r.ratio = detail::safe_ratio(r.lhs, r.rhs);
    r.extras["card_A"] = static_cast<double>(a.size());
    r.extras["max_fhat_nonzero"] = max_fhat;
    r.extras["max_f_nonzero"] = max_f;
    r.extras["supp_f"] = static_cast<double>(supp);
    r.verdict = Verdict::ReportOnly;
    return r;
}

/// E_k(A) E(A,D)^k >= |A|^{4k+1} / K with D = A - A, compared as exact
/// rationals: lhs |D| >= |A|^{4k+2}.
inline LawReport eval_remark_energy(const GroupSubset& a, int k,
                                    const Budgets& budgets = default_budgets()) {
    if (k < 2) throw validation_error("remark energy requires k >= 2");
    if (a.empty()) throw validation_error("remark energy requires a nonempty set");
    LawReport r;
    detail::LawTimer timer(r);
    r.law = "energy_product_bound";
    r.digest = detail::size_digest(a) + ";k=" + std::to_string(k);

    const GroupSubset d = sumset(a, a, -1, budgets);
    const std::int64_t e_k = exact_energy_k(a, k, budgets);
    const std::int64_t e_ad = energy(a, d, budgets);

    __int128 lhs = e_k;
    for (int i = 0; i < k; ++i) lhs = detail::mul_checked(lhs, e_ad, "remark energy lhs");
    const __int128 lhs_scaled = detail::mul_checked(lhs, d.size(), "remark energy compare");
    const __int128 rhs_scaled = detail::pow_checked(a.size(), 4 * k + 2, "remark energy rhs");

    r.lhs = static_cast<double>(lhs);
    r.rhs = std::pow(static_cast<double>(a.size()), 4.0 * k + 1.0) * static_cast<double>(a.size()) /
            static_cast<double>(d.size());
    r.ratio = detail::safe_ratio(r.lhs, r.rhs);
    r.extras["E_k"] = static_cast<double>(e_k);
    r.extras["E_A_D"] = static_cast<double>(e_ad);
    r.extras["E_A_D_over_card3"] =
        static_cast<double>(e_ad) / std::pow(static_cast<double>(a.size()), 3.0);
    r.extras["equality"] = (lhs_scaled == rhs_scaled) ? 1.0 : 0.0;
    r.verdict = (lhs_scaled >= rhs_scaled) ? Verdict::Holds : Verdict::Fails;
    return r;
}

// ---------------------------------------------------------------------------
// Identity suite (the `verify` command)

struct IdentitySuiteOptions {
    int parseval_cases = 25;
    int convolution_cases = 25;
    int lemma1_cases = 8;
    int lemma2_cases = 50;
    int katz_cases = 50;
    int symmetry_cases = 10;
    int support_cases = 50;
};

namespace detail {

inline GroupSubset random_nonempty_subset(const GroupSpec& g, SplitMix64& rng,
                                          std::int64_t max_card) {
    GroupSubset s(g);
    const std::int64_t card =
        1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_card)));
    while (s.size() < card)
        s.insert(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(g.size()))));
    return s;
}

inline LawReport suite_row(const std::string& law, int cases, int failures, double worst,
                           double bound) {
    LawReport r;
    r.law = law;
    r.lhs = worst;
    r.rhs = bound;
    r.ratio = safe_ratio(worst, bound);
    r.extras["cases"] = static_cast<double>(cases);
    r.extras["failures"] = static_cast<double>(failures);
    r.verdict = failures == 0 ? Verdict::Holds : Verdict::Fails;
    return r;
}

}  // namespace detail

/// Runs the full identity suite on one group with one seed: Parseval, the
/// convolution theorem, Lemma 1, Lemma 2, the Katz-Koester inclusion,
/// E_{k,l} symmetry and the support uncertainty bound.
inline std::vector<LawReport> run_identity_suite(const GroupSpec& g, std::uint64_t seed,
                                                 const IdentitySuiteOptions& opts = {},
                                                 const Budgets& budgets = default_budgets()) {
    if (g.size() < 2) throw validation_error("identity suite needs a group with >= 2 elements");
    std::vector<LawReport> rows;
    const std::int64_t n = g.size();
    const std::int64_t small_card = std::min<std::int64_t>(6, n);

    {  // Parseval
        SplitMix64 rng(split_stream(seed, "parseval"));
        double worst = 0.0;
        for (int i = 0; i < opts.parseval_cases; ++i) {
            std::vector<cplx> v(static_cast<std::size_t>(n));
            for (auto& z : v) z = cplx{2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0};
            worst = std::max(worst, parseval_residual(DenseFunction(g, std::move(v)),
                                                      DftPath::Auto, budgets));
        }
        rows.push_back(detail::suite_row("parseval", opts.parseval_cases,
                                         worst <= 1e-9 ? 0 : 1, worst, 1e-9));
    }

    {  // convolution theorem
        SplitMix64 rng(split_stream(seed, "convolution"));
        double worst = 0.0;
        int failures = 0;
        for (int i = 0; i < opts.convolution_cases; ++i) {
            std::vector<std::int64_t> fv(static_cast<std::size_t>(n)), gv(static_cast<std::size_t>(n));
            for (auto& x : fv) x = static_cast<std::int64_t>(rng.below(11)) - 5;
            for (auto& x : gv) x = static_cast<std::int64_t>(rng.below(11)) - 5;
            const DenseFunction f = DenseFunction::from_integers(g, fv);
            const DenseFunction h = DenseFunction::from_integers(g, gv);
            const Spectrum lhs = dft(convolve_star(f, h, budgets), DftPath::Auto, budgets);
            const Spectrum fs = dft(f, DftPath::Auto, budgets);
            const Spectrum hs = dft(h, DftPath::Auto, budgets);
            double dev = 0.0;
            for (std::size_t j = 0; j < lhs.values().size(); ++j)
                dev = std::max(dev,
                               std::abs(lhs.values()[j] - fs.values()[j] * hs.values()[j]));
            const double scale = std::max(1.0, f.norm1() * h.norm1());
            worst = std::max(worst, dev / scale);
            if (dev > 1e-9 * scale) ++failures;
        }
        rows.push_back(detail::suite_row("convolution_theorem", opts.convolution_cases, failures,
                                         worst, 1e-9));
    }

    {  // Lemma 1 (k even, l = 2; l = 3 when the product group stays small)
        SplitMix64 rng(split_stream(seed, "lemma1"));
        int failures = 0;
        int cases = 0;
        for (int i = 0; i < opts.lemma1_cases; ++i) {
            const GroupSubset a = detail::random_nonempty_subset(g, rng, small_card);
            for (int k : {2, 4})
                for (int l : {2, 3}) {
                    if (l == 3 && n * n > budgets.max_dense) continue;
                    const LawReport lr = check_lemma1(a, k, l, budgets);
                    ++cases;
                    if (lr.verdict != Verdict::Holds) ++failures;
                }
        }
        rows.push_back(detail::suite_row("lemma1_moment_identity", cases, failures,
                                         static_cast<double>(failures), 0.0));
    }

    {  // Lemma 2 with arities in {1, 2}
        SplitMix64 rng(split_stream(seed, "lemma2"));
        int failures = 0;
        for (int i = 0; i < opts.lemma2_cases; ++i) {
            const int k1 = 1 + static_cast<int>(rng.below(2));
            const int k2 = 1 + static_cast<int>(rng.below(2));
            TupleSet w(g, k1, budgets.max_tuples);
            TupleSet y(g, k2, budgets.max_tuples);
            for (int t = 0; t < 3; ++t) {
                std::vector<std::int64_t> tup;
                for (int j = 0; j < k1; ++j)
                    tup.push_back(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n))));
                w.insert(tup);
                tup.clear();
                for (int j = 0; j < k2; ++j)
                    tup.push_back(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n))));
                y.insert(tup);
            }
            const GroupSubset x = detail::random_nonempty_subset(g, rng, small_card);
            const GroupSubset z = detail::random_nonempty_subset(g, rng, small_card);
            if (check_lemma2(w, x, y, z, budgets).verdict != Verdict::Holds) ++failures;
        }
        rows.push_back(detail::suite_row("lemma2_triangle", opts.lemma2_cases, failures,
                                         static_cast<double>(failures), 0.0));
    }

    {  // Katz-Koester
        SplitMix64 rng(split_stream(seed, "katz"));
        int failures = 0;
        for (int i = 0; i < opts.katz_cases; ++i) {
            const GroupSubset a = detail::random_nonempty_subset(g, rng, small_card);
            const GroupSubset b = detail::random_nonempty_subset(g, rng, small_card);
            const std::int64_t x =
                static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
            if (check_katz_koester(a, b, x, budgets).verdict != Verdict::Holds) ++failures;
        }
        rows.push_back(detail::suite_row("katz_koester_inclusion", opts.katz_cases, failures,
                                         static_cast<double>(failures), 0.0));
    }

    {  // E_{k,l} symmetry
        SplitMix64 rng(split_stream(seed, "energy_kl"));
        int failures = 0;
        for (int i = 0; i < opts.symmetry_cases; ++i) {
            const GroupSubset a = detail::random_nonempty_subset(g, rng, small_card);
            if (energy_kl(a, 2, 3, budgets) != energy_kl(a, 3, 2, budgets)) ++failures;
        }
        rows.push_back(detail::suite_row("energy_kl_symmetry", opts.symmetry_cases, failures,
                                         static_cast<double>(failures), 0.0));
    }

    {  // support uncertainty
        SplitMix64 rng(split_stream(seed, "support"));
        int failures = 0;
        for (int i = 0; i < opts.support_cases; ++i) {
            std::vector<cplx> v(static_cast<std::size_t>(n), cplx{0.0, 0.0});
            const std::int64_t nonzeros =
                1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
            for (std::int64_t t = 0; t < nonzeros; ++t)
                v[rng.below(static_cast<std::uint64_t>(n))] =
                    cplx{2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0};
            bool any = false;
            for (const auto& z : v) any = any || z != cplx{0.0, 0.0};
            if (!any) v[0] = 1.0;
            if (check_support_uncertainty(DenseFunction(g, std::move(v)), budgets).verdict !=
                Verdict::Holds)
                ++failures;
        }
        rows.push_back(detail::suite_row("support_uncertainty", opts.support_cases, failures,
                                         static_cast<double>(failures), 0.0));
    }

    return rows;
}

}  // namespace addcomb
