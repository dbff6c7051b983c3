// Command-line driver: space construction, exact verification ledgers,
// lift tables, q-series dumps, prime statistics, and the Monte Carlo
// sampler.  Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 precision exhaustion.
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "halfint/arith.hpp"
#include "halfint/errors.hpp"
#include "halfint/hecke.hpp"
#include "halfint/oracle.hpp"
#include "halfint/qseries.hpp"
#include "halfint/report.hpp"
#include "halfint/shimura.hpp"
#include "halfint/spaces.hpp"
#include "halfint/stats.hpp"

namespace {

using namespace halfint;
namespace fs = std::filesystem;

// ---- small utilities ----------------------------------------------------

Rational parse_decimal(const std::string& raw) {
    std::string s = raw;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    const auto dot = s.find('.');
    std::string int_part = dot == std::string::npos ? s : s.substr(0, dot);
    std::string frac_part = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty())
        throw std::invalid_argument("cannot parse '" + raw + "' as a decimal number");
    for (char c : int_part + frac_part)
        if (c < '0' || c > '9')
            throw std::invalid_argument("cannot parse '" + raw + "' as a decimal number");
    Integer num(int_part.empty() && frac_part.empty() ? "0" : int_part + frac_part, 10);
    Integer den = pow_ui(Integer(10), frac_part.size());
    Rational r(num, den);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

Interval parse_interval(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("interval must be given as 'lo,hi'; got '" + s + "'");
    return Interval(parse_decimal(s.substr(0, comma)), parse_decimal(s.substr(comma + 1)));
}

std::string sanitize_for_filename(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '/' || c == '.' || c == ' ') c = '_';
    return s;
}

struct OutputCfg {
    fs::path dir;
    std::string format = "both";  // csv | json | both
};

fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("HALFINT_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

void emit(const OutputCfg& out, const std::string& base, const std::string& ext,
          const std::string& content) {
    const fs::path p = out.dir / (base + ext);
    write_text_file(p, content);
    std::cout << "wrote " << p.string() << "\n";
}

void emit_density(const OutputCfg& out, const std::string& base,
                  const DensityReport& rep) {
    if (out.format != "json") emit(out, base, ".csv", density_csv(rep));
    if (out.format != "csv") emit(out, base, ".json", density_json(rep));
}

std::string fmt_ratio(long double v) { return format_double(static_cast<double>(v)); }

void print_density_summary(const DensityReport& rep) {
    for (const auto& s : rep.series) {
        std::cout << "  series " << s.name;
        if (s.reference) std::cout << " (reference " << fmt_ratio(*s.reference) << ")";
        std::cout << ":";
        for (std::size_t i = 0; i < rep.checkpoints.size(); ++i)
            std::cout << "  x=" << rep.checkpoints[i] << " -> " << s.counts[i] << " ("
                      << fmt_ratio(s.ratios[i]) << ")";
        std::cout << "\n";
    }
}

// Scale a normalized eigenform so that a(t) = 1 at a caller-chosen
// admissible square-free index instead of the least one.
HalfIntegralForm renormalize_at(const HalfIntegralForm& f, std::uint64_t t) {
    if (!is_squarefree(t) || !admissible_index(t, f.k))
        throw std::invalid_argument("index t = " + std::to_string(t) +
                                    " is not an admissible square-free index for this space");
    if (t >= f.coeffs.precision())
        throw PrecisionError("requested t is beyond the computed precision");
    const Rational c = f.coeffs.coeff(t);
    if (sgn(c) == 0)
        throw std::invalid_argument("coefficient at t = " + std::to_string(t) +
                                    " vanishes; cannot normalize there");
    HalfIntegralForm g = f;
    g.coeffs /= c;
    for (auto& [exps, w] : g.combination) w /= c;
    g.t = t;
    g.normalized = true;
    g.eigenvalues = f.eigenvalues;
    return g;
}

// ---- space --------------------------------------------------------------

int cmd_space(int k, std::size_t prec) {
    SpaceBasis space = plus_cusp_space(k, prec);
    std::cout << "weight " << (2 * k + 1) << "/2 forms on Gamma0(4), precision " << prec
              << "\n";
    std::cout << "monomial generators (a,b) with a + 4b = " << (2 * k + 1) << ":";
    for (const auto& [a, b] : space.monomials) std::cout << " (" << a << "," << b << ")";
    std::cout << "\nplus-cusp dimension: " << space.dimension() << "\n";
    if (space.dimension() == 0) return 0;

    for (std::size_t i = 0; i < space.forms.size(); ++i) {
        const auto& f = space.forms[i];
        std::cout << "basis form " << (i + 1) << " head:";
        for (std::size_t n = 0; n < std::min<std::size_t>(17, f.coeffs.precision()); ++n)
            std::cout << " " << f.coeffs.coeff(n).get_str();
        std::cout << "\n";
    }
    try {
        std::vector<HalfIntegralForm> eig = eigenbasis(space, {3, 5});
        std::cout << "eigenvalue table (T_{p^2}):\n";
        std::cout << "  p";
        for (std::size_t i = 0; i < eig.size(); ++i) std::cout << "\tform " << (i + 1);
        std::cout << "\n";
        for (std::uint64_t p : {3ULL, 5ULL}) {
            std::cout << "  " << p;
            for (const auto& f : eig)
                std::cout << "\t" << f.eigenvalues.at(p).get_str();
            std::cout << "\n";
        }
    } catch (const EigenSplitError& e) {
        std::cout << "eigenvalue table unavailable: " << e.what() << "\n";
    }
    return 0;
}

// ---- verify -------------------------------------------------------------

int cmd_verify(int k, std::size_t prec, const std::vector<std::uint64_t>& primes,
               std::size_t lift_n, std::optional<std::uint64_t> corrupt_index) {
    int failures = 0;
    const auto check = [&](const std::string& name, const std::function<void()>& fn) {
        try {
            fn();
            std::cout << "PASS " << name << "\n";
        } catch (const PrecisionError&) {
            throw;  // a precision shortfall is a contract violation, not a wrong answer
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "FAIL " << name << ": " << e.what() << "\n";
        }
    };

    SpaceBasis space = plus_cusp_space(k, prec);
    if (space.dimension() == 0)
        throw std::invalid_argument("the weight-" + std::to_string(2 * k + 1) +
                                    "/2 plus-cusp space is zero-dimensional; nothing to verify");
    std::vector<HalfIntegralForm> eig = eigenbasis(space, {3});
    HalfIntegralForm f = normalize_at_t(eig.front());
    const std::uint64_t t = f.t;
    std::cout << "eigenform of weight " << (2 * k + 1) << "/2, normalized at t = " << t
              << "\n";

    HalfIntegralForm deep =
        extend_precision(f, static_cast<std::size_t>(t) * lift_n * lift_n + 1);
    if (corrupt_index) {
        deep.coeffs.set_coeff(*corrupt_index, deep.coeffs.coeff(*corrupt_index) + 1);
        std::cout << "injected fault: a(" << *corrupt_index << ") += 1\n";
    }

    check("plus-space coefficient support", [&] {
        for (std::size_t n = 0; n < deep.coeffs.precision(); ++n) {
            const std::uint64_t r = n % 4;
            const std::uint64_t killed = (k % 2 == 0) ? 3 : 1;
            if ((r == 2 || r == killed) && sgn(deep.coeffs.coeff(n)) != 0)
                throw VerificationError("nonzero coefficient at excluded class n = " +
                                        std::to_string(n));
        }
        if (sgn(deep.coeffs.coeff(0)) != 0)
            throw VerificationError("nonzero constant term");
    });

    check("normalization at t", [&] {
        if (deep.coeffs.coeff(t) != 1) throw VerificationError("a(t) != 1");
    });

    for (std::uint64_t p : primes) {
        check("Hecke eigen-consistency p=" + std::to_string(p), [&, p] {
            HalfIntegralForm img = tp2_half(f, p);
            const Rational lambda = img.coeffs.coeff(t);
            QSeries scaled = f.coeffs.truncated(img.coeffs.precision());
            scaled *= lambda;
            if (!(scaled == img.coeffs))
                throw VerificationError("T_{p^2} image is not proportional to the form");
        });
    }

    IntegralForm F = shimura_lift(deep, lift_n + 1);
    check("lift leading coefficient", [&] {
        if (F.coeffs.coeff(1) != 1) throw VerificationError("A(1) != 1");
    });

    const int weight2k = 2 * k;
    const bool level1_known =
        weight2k == 12 || weight2k == 16 || weight2k == 18 || weight2k == 20 ||
        weight2k == 22 || weight2k == 26;
    if (level1_known) {
        check("lift matches the weight-" + std::to_string(weight2k) +
                  " level-1 eigenform (n <= " + std::to_string(lift_n) + ")",
              [&] {
                  QSeries ref = level1_cusp_eigenform(weight2k, lift_n + 1);
                  for (std::size_t n = 0; n <= lift_n; ++n)
                      if (F.coeffs.coeff(n) != ref.coeff(n))
                          throw VerificationError("mismatch at n = " + std::to_string(n) +
                                                  ": " + F.coeffs.coeff(n).get_str() +
                                                  " vs " + ref.coeff(n).get_str());
              });
    } else {
        std::cout << "SKIP lift comparison: no one-dimensional level-1 target at weight "
                  << weight2k << "\n";
    }

    check("prime coefficient relation (odd p <= " + std::to_string(lift_n) + ")", [&] {
        for (std::uint64_t p = 3; p <= lift_n; p += 2) {
            if (!is_prime_u64(p)) continue;
            if (Rational(prime_relation(deep, p)) != F.coeffs.coeff(p))
                throw VerificationError("mismatch at p = " + std::to_string(p));
        }
    });

    for (std::uint64_t p : primes) {
        check("lift/Hecke commutation p=" + std::to_string(p), [&, p] {
            HalfIntegralForm img = tp2_half(deep, p);
            // largest n for which both routes have the data: the lift of the
            // image needs a(t n^2) of the image, T_p of the lift needs A(n p)
            const auto fits = [&](std::size_t n) {
                return t * n * n < img.coeffs.precision() &&
                       t * (n * p) * (n * p) < deep.coeffs.precision();
            };
            std::size_t n_out = 2;
            while (fits(n_out + 1)) ++n_out;
            QSeries lhs = shimura_lift_series(img.coeffs, k, t, n_out + 1);
            IntegralForm big = shimura_lift(deep, n_out * p + 1);
            IntegralForm rhs = tp_integral(big, p);
            if (!QSeries::agree_on_overlap(lhs, rhs.coeffs))
                throw VerificationError("lift of the T_{p^2} image differs from T_p of the lift");
        });
    }

    check("prime-power recursion (p=3, m=1,2)", [&] {
        if (Rational(coeff_tp2m(deep, 3, 1)) != deep.coeffs.coeff(9 * t) ||
            Rational(coeff_tp2m(deep, 3, 2)) != deep.coeffs.coeff(81 * t))
            throw VerificationError("recursion values differ from the expansion");
    });

    check("coefficient bound at primes (<= " + std::to_string(lift_n) + ")", [&] {
        for (std::uint64_t p = 2; p <= lift_n; ++p) {
            if (!is_prime_u64(p)) continue;
            const Integer A = F.coeff_int(p);
            const Integer bound = 4 * pow_ui(Integer(p), 2 * static_cast<unsigned long>(k) - 1);
            if (A * A > bound)
                throw VerificationError("bound violated at p = " + std::to_string(p));
        }
    });

    std::cout << (failures == 0 ? "all checks passed" : "FAILURES: " + std::to_string(failures))
              << "\n";
    return failures == 0 ? 0 : 1;
}

// ---- lift / series ------------------------------------------------------

int cmd_lift(int k, std::size_t n_max, std::optional<std::uint64_t> t_override,
             const std::string& out_file) {
    SpaceBasis space = plus_cusp_space(k, 400);
    if (space.dimension() == 0)
        throw std::invalid_argument("zero-dimensional space; nothing to lift");
    HalfIntegralForm f = normalize_at_t(eigenbasis(space, {3}).front());
    if (t_override) f = renormalize_at(f, *t_override);
    const std::uint64_t t = f.t;
    HalfIntegralForm deep =
        extend_precision(f, static_cast<std::size_t>(t) * n_max * n_max + 1);
    IntegralForm F = shimura_lift(deep, n_max + 1);
    std::string table;
    for (std::size_t n = 1; n <= n_max; ++n)
        table += std::to_string(n) + "\t" + F.coeffs.coeff(n).get_str() + "\n";
    if (out_file.empty()) {
        std::cout << "lift of the weight-" << (2 * k + 1) << "/2 eigenform at t = " << t
                  << " (weight " << 2 * k << "):\n" << table;
    } else {
        write_text_file(out_file, table);
        std::cout << "wrote " << out_file << "\n";
    }
    return 0;
}

int cmd_series(const std::string& name, std::size_t prec, const std::string& out_file) {
    QSeries s = [&]() -> QSeries {
        if (name == "theta") return theta_series(prec);
        if (name == "f2") return f2_series(prec);
        if (name == "e4") return eisenstein_series(4, prec);
        if (name == "e6") return eisenstein_series(6, prec);
        if (name == "delta") return delta_series(prec);
        if (name.rfind("eigen", 0) == 0)
            return level1_cusp_eigenform(std::stoi(name.substr(5)), prec);
        throw std::invalid_argument(
            "unknown series '" + name +
            "' (expected theta, f2, e4, e6, delta, or eigen<weight>)");
    }();
    std::ostringstream os;
    s.dump(os);
    const std::string text = os.str();
    if (out_file.empty())
        std::cout << text;
    else {
        write_text_file(out_file, text);
        std::cout << "wrote " << out_file << "\n";
    }
    return 0;
}

// ---- stats subcommands ----------------------------------------------------

struct StatsCommon {
    std::uint64_t x = 10000;
    unsigned workers = 1;
    std::string out_dir_flag;
    std::string format = "both";
};

LiftedEigenform build_with_log(int k, std::uint64_t x) {
    LiftedEigenform e = build_desk_eigenform(k, x);
    std::cout << "built weight-" << (2 * k + 1) << "/2 eigenform (t = " << e.f.t
              << "); lift cross-checked on " << e.verified_overlap << " coefficients\n";
    return e;
}

int cmd_stats_prop1(int k1, const StatsCommon& c) {
    OutputCfg out{resolve_out_dir(c.out_dir_flag), c.format};
    LiftedEigenform e = build_with_log(k1, c.x);
    PrimeTable pt(c.x);
    DensityReport rep = sign_exception_ratio(e, c.x, pt, c.workers);
    print_density_summary(rep);
    emit_density(out, "prop1_k" + std::to_string(k1) + "_x" + std::to_string(c.x), rep);
    return 0;
}

int cmd_stats_thm4(int k1, int k2, const StatsCommon& c) {
    OutputCfg out{resolve_out_dir(c.out_dir_flag), c.format};
    LiftedEigenform e1 = build_with_log(k1, c.x);
    LiftedEigenform e2 = build_with_log(k2, c.x);
    PrimeTable pt(c.x);
    DensityReport rep = product_sign_counts(e1, e2, c.x, pt, c.workers);
    print_density_summary(rep);
    emit_density(out,
                 "thm4_k" + std::to_string(k1) + "_k" + std::to_string(k2) + "_x" +
                     std::to_string(c.x),
                 rep);
    return 0;
}

int cmd_stats_thm5(int k1, int k2, const std::string& i1s, const std::string& i2s,
                   const StatsCommon& c) {
    const Interval I1 = parse_interval(i1s);
    const Interval I2 = parse_interval(i2s);
    OutputCfg out{resolve_out_dir(c.out_dir_flag), c.format};
    LiftedEigenform e1 = build_with_log(k1, c.x);
    LiftedEigenform e2 = build_with_log(k2, c.x);
    PrimeTable pt(c.x);
    DensityReport rep = joint_interval_density(e1, e2, c.x, I1, I2, pt, c.workers);
    print_density_summary(rep);
    emit_density(out,
                 "thm5_k" + std::to_string(k1) + "_k" + std::to_string(k2) + "_x" +
                     std::to_string(c.x) + "_i1_" + sanitize_for_filename(i1s) + "_i2_" +
                     sanitize_for_filename(i2s),
                 rep);
    return 0;
}

int cmd_stats_joint(int k1, int k2, unsigned bins, unsigned marginal_bins,
                    const StatsCommon& c) {
    OutputCfg out{resolve_out_dir(c.out_dir_flag), c.format};
    LiftedEigenform e1 = build_with_log(k1, c.x);
    LiftedEigenform e2 = build_with_log(k2, c.x);
    PrimeTable pt(c.x);

    JointHistogram jh = joint_histogram(e1.lift, e2.lift, c.x, bins, pt, c.workers);
    std::cout << "joint " << bins << "x" << bins
              << " max |empirical - reference| = " << fmt_ratio(jh.max_abs_deviation())
              << " (in-domain " << jh.in_domain << ", outside " << jh.out_of_domain
              << ")\n";
    const std::string jbase = "joint_k" + std::to_string(k1) + "_k" + std::to_string(k2) +
                              "_x" + std::to_string(c.x) + "_b" + std::to_string(bins);
    if (out.format != "json") emit(out, jbase, ".csv", joint_csv(jh));
    if (out.format != "csv") emit(out, jbase, ".json", joint_json(jh));
    emit(out, jbase, ".gnuplot", joint_gnuplot(jh));

    for (const auto* e : {&e1, &e2}) {
        Histogram mh = marginal_histogram(e->lift, c.x, marginal_bins, pt, c.workers);
        long double maxdev = 0.0L;
        for (unsigned i = 0; i < mh.bins; ++i)
            maxdev = std::max(maxdev,
                              std::fabs(mh.empirical_mass[i] - mh.reference_mass[i]));
        std::cout << "marginal (weight " << e->lift.weight << ", " << marginal_bins
                  << " bins) max deviation = " << fmt_ratio(maxdev) << "\n";
        const std::string mbase = "marginal_k" + std::to_string(e->f.k) + "_x" +
                                  std::to_string(c.x) + "_b" +
                                  std::to_string(marginal_bins);
        if (out.format != "json") emit(out, mbase, ".csv", histogram_csv(mh));
        if (out.format != "csv") emit(out, mbase, ".json", histogram_json(mh));
        emit(out, mbase, ".gnuplot", histogram_gnuplot(mh));
    }
    return 0;
}

int cmd_stats_disagree(int k1, int k2, const StatsCommon& c) {
    OutputCfg out{resolve_out_dir(c.out_dir_flag), c.format};
    LiftedEigenform e1 = build_with_log(k1, c.x);
    LiftedEigenform e2 = build_with_log(k2, c.x);
    PrimeTable pt(c.x);
    DisagreementReport rep = sign_disagreement_report(e1, e2, c.x, pt, c.workers);
    print_density_summary(rep.density);
    std::cout << "disagreement density "
              << fmt_ratio(rep.density.series[0].ratios.back()) << " vs threshold 6/25 = 0.24: "
              << (rep.exceeds_threshold ? "exceeds" : "does not exceed") << "\n";
    const std::string base = "disagree_k" + std::to_string(k1) + "_k" +
                             std::to_string(k2) + "_x" + std::to_string(c.x);
    emit_density(out, base, rep.density);
    if (out.format != "csv") emit(out, base, ".primes.json", disagreement_json(rep));
    emit(out, base + "_primes", ".txt", disagreement_primes_text(rep));
    return 0;
}

int cmd_simulate(std::uint64_t n, std::uint64_t seed, const std::string& mode,
                 unsigned workers, const std::string& out_dir_flag,
                 const std::string& format) {
    SamplerConfig cfg;
    cfg.sample_count = n;
    cfg.seed = seed;
    cfg.workers = workers;
    if (mode == "none")
        cfg.shift_mode = ShiftMode::none;
    else if (mode == "per_prime")
        cfg.shift_mode = ShiftMode::per_prime;
    else
        throw std::invalid_argument("shift mode must be 'none' or 'per_prime'");
    OutputCfg out{resolve_out_dir(out_dir_flag), format};
    DensityReport rep = simulate_product_signs(cfg);
    print_density_summary(rep);
    emit_density(out,
                 "simulate_n" + std::to_string(n) + "_seed" + std::to_string(seed) + "_" +
                     mode,
                 rep);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"half-integral weight eigenforms, their lifts, and prime statistics"};
    app.require_subcommand(1);
    int rc = 0;

    // ---- space ----
    int sp_k = 6;
    std::size_t sp_prec = 400;
    auto* sp = app.add_subcommand("space", "build a plus-cusp space and report it");
    sp->add_option("--k", sp_k, "weight index k (weight is k + 1/2 doubled: (2k+1)/2)")
        ->required()
        ->check(CLI::Range(2, 64));
    sp->add_option("--prec", sp_prec, "working precision (default 400)")
        ->check(CLI::Range(static_cast<std::size_t>(20), static_cast<std::size_t>(100000)));
    sp->callback([&] { rc = cmd_space(sp_k, sp_prec); });

    // ---- verify ----
    int vf_k = 6;
    std::size_t vf_prec = 400, vf_lift_n = 100;
    std::vector<std::uint64_t> vf_primes{3, 5, 7};
    std::optional<std::uint64_t> vf_corrupt;
    std::uint64_t vf_corrupt_raw = 0;
    auto* vf = app.add_subcommand("verify", "run the exact identity ledger");
    vf->add_option("--k", vf_k, "weight index k")->check(CLI::Range(2, 64));
    vf->add_option("--prec", vf_prec, "space construction precision");
    vf->add_option("--primes", vf_primes, "odd primes for operator checks");
    vf->add_option("--lift-n", vf_lift_n, "depth of the lift comparisons")
        ->check(CLI::Range(static_cast<std::size_t>(10), static_cast<std::size_t>(2000)));
    auto* co = vf->add_option("--corrupt", vf_corrupt_raw,
                              "inject a +1 fault at this coefficient index");
    vf->callback([&] {
        if (co->count() > 0) vf_corrupt = vf_corrupt_raw;
        rc = cmd_verify(vf_k, vf_prec, vf_primes, vf_lift_n, vf_corrupt);
    });

    // ---- lift ----
    int lf_k = 6;
    std::size_t lf_n = 100;
    std::uint64_t lf_t_raw = 0;
    std::string lf_out;
    auto* lf = app.add_subcommand("lift", "print the lift coefficient table n<TAB>A(n)");
    lf->add_option("--k", lf_k, "weight index k")->check(CLI::Range(2, 64));
    lf->add_option("--n", lf_n, "table depth")->check(CLI::Range(1, 3000));
    auto* lt = lf->add_option("--t", lf_t_raw, "normalize at this square-free index");
    lf->add_option("--out", lf_out, "output file (default stdout)");
    lf->callback([&] {
        std::optional<std::uint64_t> t_override;
        if (lt->count() > 0) t_override = lf_t_raw;
        rc = cmd_lift(lf_k, lf_n, t_override, lf_out);
    });

    // ---- series ----
    std::string se_name;
    std::size_t se_prec = 100;
    std::string se_out;
    auto* se = app.add_subcommand("series", "dump a named q-expansion, one exact "
                                            "coefficient per line");
    se->add_option("--name", se_name, "theta | f2 | e4 | e6 | delta | eigen<weight>")
        ->required();
    se->add_option("--prec", se_prec, "number of coefficients")
        ->check(CLI::Range(static_cast<std::size_t>(1), static_cast<std::size_t>(3000000)));
    se->add_option("--out", se_out, "output file (default stdout)");
    se->callback([&] { rc = cmd_series(se_name, se_prec, se_out); });

    // ---- stats ----
    auto* st = app.add_subcommand("stats", "prime statistics over the desk-scale pair");
    st->require_subcommand(1);

    struct BoundCommon {
        StatsCommon c;
        void bind(CLI::App* cmd) {
            cmd->add_option("--x", c.x, "prime bound (default 10000)")
                ->check(CLI::Range(static_cast<std::uint64_t>(100),
                                   static_cast<std::uint64_t>(2000000)));
            cmd->add_option("--workers", c.workers, "worker threads (default 1)")
                ->check(CLI::Range(1u, 256u));
            cmd->add_option("--out-dir", c.out_dir_flag,
                            "output directory (default $HALFINT_OUTPUT_DIR or .)");
            cmd->add_option("--format", c.format, "csv | json | both (default both)")
                ->check(CLI::IsMember({"csv", "json", "both"}));
        }
    };

    static BoundCommon p1c;
    int p1_k1 = 6;
    auto* p1 = st->add_subcommand("prop1", "sign-exception ratio for one eigenform");
    p1->add_option("--k1", p1_k1, "weight index (default 6)")->check(CLI::Range(2, 64));
    p1c.bind(p1);
    p1->callback([&] { rc = cmd_stats_prop1(p1_k1, p1c.c); });

    static BoundCommon t4c;
    int t4_k1 = 6, t4_k2 = 8;
    auto* t4 = st->add_subcommand("thm4", "product-sign density partition");
    t4->add_option("--k1", t4_k1, "first weight index")->check(CLI::Range(2, 64));
    t4->add_option("--k2", t4_k2, "second weight index")->check(CLI::Range(2, 64));
    t4c.bind(t4);
    t4->callback([&] { rc = cmd_stats_thm4(t4_k1, t4_k2, t4c.c); });

    static BoundCommon t5c;
    int t5_k1 = 6, t5_k2 = 8;
    std::string t5_i1 = "0,1", t5_i2 = "0,1";
    auto* t5 = st->add_subcommand("thm5", "joint interval density of normalized "
                                          "coefficients");
    t5->add_option("--k1", t5_k1, "first weight index")->check(CLI::Range(2, 64));
    t5->add_option("--k2", t5_k2, "second weight index")->check(CLI::Range(2, 64));
    t5->add_option("--i1", t5_i1, "first interval as lo,hi decimals (default 0,1)");
    t5->add_option("--i2", t5_i2, "second interval as lo,hi decimals (default 0,1)");
    t5c.bind(t5);
    t5->callback([&] { rc = cmd_stats_thm5(t5_k1, t5_k2, t5_i1, t5_i2, t5c.c); });

    static BoundCommon jtc;
    int jt_k1 = 6, jt_k2 = 8;
    unsigned jt_bins = 5, jt_mbins = 10;
    auto* jt = st->add_subcommand("joint", "joint + marginal histograms of normalized "
                                           "lift coefficients");
    jt->add_option("--k1", jt_k1, "first weight index")->check(CLI::Range(2, 64));
    jt->add_option("--k2", jt_k2, "second weight index")->check(CLI::Range(2, 64));
    jt->add_option("--bins", jt_bins, "joint grid size (default 5)")
        ->check(CLI::Range(2u, 64u));
    jt->add_option("--marginal-bins", jt_mbins, "marginal bin count (default 10)")
        ->check(CLI::Range(2u, 256u));
    jtc.bind(jt);
    jt->callback([&] { rc = cmd_stats_joint(jt_k1, jt_k2, jt_bins, jt_mbins, jtc.c); });

    static BoundCommon dgc;
    int dg_k1 = 6, dg_k2 = 8;
    auto* dg = st->add_subcommand("disagree", "primes where the two coefficient "
                                              "sequences have opposite signs");
    dg->add_option("--k1", dg_k1, "first weight index")->check(CLI::Range(2, 64));
    dg->add_option("--k2", dg_k2, "second weight index")->check(CLI::Range(2, 64));
    dgc.bind(dg);
    dg->callback([&] { rc = cmd_stats_disagree(dg_k1, dg_k2, dgc.c); });

    // ---- simulate ----
    std::uint64_t sm_n = 1000000, sm_seed = 42;
    std::string sm_mode = "per_prime", sm_out_dir, sm_format = "both";
    unsigned sm_workers = 1;
    auto* sm = app.add_subcommand("simulate", "Monte Carlo product-sign sampler "
                                              "(independent of the eigenform data path)");
    sm->add_option("--n", sm_n, "sample count (default 10^6)")
        ->check(CLI::Range(static_cast<std::uint64_t>(2),
                           static_cast<std::uint64_t>(1000000000)));
    sm->add_option("--seed", sm_seed, "RNG seed (default 42)");
    sm->add_option("--shift-mode", sm_mode, "none | per_prime (default per_prime)")
        ->check(CLI::IsMember({"none", "per_prime"}));
    sm->add_option("--workers", sm_workers, "worker threads (default 1)")
        ->check(CLI::Range(1u, 256u));
    sm->add_option("--out-dir", sm_out_dir,
                   "output directory (default $HALFINT_OUTPUT_DIR or .)");
    sm->add_option("--format", sm_format, "csv | json | both (default both)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    sm->callback([&] {
        rc = cmd_simulate(sm_n, sm_seed, sm_mode, sm_workers, sm_out_dir, sm_format);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const PrecisionError& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 3;
    } catch (const EigenSplitError& e) {
        std::cerr << "eigen-splitting failed: " << e.what() << "\n";
        return 1;
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
