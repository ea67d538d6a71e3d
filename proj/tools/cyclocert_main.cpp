// Command-line front end: certify / rank / series / delta / siegel.
// Exit codes: 0 pass, 1 fail, 2 usage error.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "cyclocert/certifier.hpp"

using namespace cyclocert;

namespace {

int run_certify(long p, const std::string& out, bool skip_delta) {
    CertifyOptions opts;
    opts.skip_delta = skip_delta;
    const auto cert = certify(p, opts);
    const auto j = certificate_to_json(cert);
    if (!recheck_certificate(j)) {
        std::cerr << "certify: certificate failed its own recheck\n";
        return 1;
    }
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "certify: cannot write " << out << "\n";
            return 2;
        }
        f << j.dump(2) << "\n";
    }
    std::cout << j.dump(2) << std::endl;
    return cert.overall ? 0 : 1;
}

int run_rank(long p) {
    const auto rep = irregularity_index(PrimeContext::make(p));
    nlohmann::json j;
    j["p"] = std::to_string(rep.p);
    j["i_p"] = std::to_string(rep.i_p);
    j["D"] = std::to_string(rep.D);
    j["irregular_ks"] = nlohmann::json::array();
    for (long k : rep.irregular_ks) j["irregular_ks"].push_back(std::to_string(k));
    std::cout << j.dump(2) << std::endl;
    return 0;
}

int run_series(long p, const std::string& theta_text, long deg, const std::string& check,
               const std::string& csv) {
    const auto sctx = make_series_context(p);
    const auto theta = GroupRingElem::from_text(p, theta_text);
    if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) {
            std::cerr << "series: cannot write " << csv << "\n";
            return 2;
        }
        const auto s = f_theta(theta, deg, sctx);
        f << "n,e_n";
        for (long c = 1; c < p; ++c) f << ",a_n_coeff_" << c;
        f << "\n";
        for (long n = 0; n <= deg; ++n) {
            f << n << "," << e_exponent(n, p);
            for (long c = 1; c < p; ++c) f << "," << rat_str(s.coeff(n).coeff(c));
            f << "\n";
        }
    }
    nlohmann::json j;
    j["p"] = std::to_string(p);
    j["theta"] = theta.to_text();
    j["deg"] = std::to_string(deg);
    bool ok = false;
    if (check == "pthpower") {
        const auto v = verify_pth_power(theta, deg, sctx);
        ok = v.ok;
        j["check"] = "pthpower";
        j["first_mismatch"] = std::to_string(v.first_mismatch);
    } else if (check == "integrality") {
        const auto rep = integrality_and_bounds(theta, deg, sctx);
        ok = rep.a_integral.ok && rep.alpha_integral.ok;
        j["check"] = "integrality";
        j["a_integral"] = rep.a_integral.ok;
        j["alpha_integral"] = rep.alpha_integral.ok;
        j["uncorrected_exponent_integral"] = rep.uncorrected_exponent_integral.ok;
    } else if (check == "bounds") {
        const auto rep = integrality_and_bounds(theta, deg, sctx);
        ok = rep.eq_abound.ok && (!rep.eq_weak.applicable || rep.eq_weak.ok);
        j["check"] = "bounds";
        j["abound"] = rep.eq_abound.ok;
        j["weak_applicable"] = rep.eq_weak.applicable;
        j["weak"] = rep.eq_weak.ok;
        j["sharp"] = rep.eq_sharp.ok;
    } else {
        std::cerr << "series: unknown check kind " << check << "\n";
        return 2;
    }
    j["ok"] = ok;
    std::cout << j.dump(2) << std::endl;
    return ok ? 0 : 1;
}

int run_delta(long p, long w, long deg, std::uint64_t seed, const std::string& out) {
    const auto t0 = std::chrono::steady_clock::now();
    auto cert = delta_certificate(p, w, deg, seed);
    cert.runtime_ms = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count());
    const auto j = delta_to_json(cert);
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "delta: cannot write " << out << "\n";
            return 2;
        }
        f << j.dump(2) << "\n";
    }
    std::cout << j.dump(2) << std::endl;
    const bool ok = cert.H_nonzero && cert.orthogonality_ok && cert.covariance_ok && cert.reverify_ok;
    return ok ? 0 : 1;
}

int run_siegel(long rows, long cols, long max_entry, std::uint64_t seed) {
    SplitMix64 rng(seed);
    auto A = IntMatrix::zero(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j)
            A.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                Int(rng.range(-max_entry, max_entry));
    const auto s = siegel_solve(A, seed);
    nlohmann::json j;
    j["w"] = nlohmann::json::array();
    for (const auto& v : s.w) j["w"].push_back(v.get_str());
    j["inf_norm"] = s.inf_norm.get_str();
    j["bound"] = s.bound_ceiling.get_str();
    j["within_bound"] = s.within_bound;
    std::cout << j.dump(2) << std::endl;
    return s.within_bound ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact cyclotomic arithmetic and certified lower-bound verification"};
    app.require_subcommand(1);

    long p = 0, deg = 30, w = 2, rows = 2, cols = 6, max_entry = 9;
    std::uint64_t seed = 1;
    std::string out, theta_text, check = "pthpower", csv;
    bool skip_delta = false;

    auto* c_certify = app.add_subcommand("certify", "run the full certificate for a prime");
    c_certify->add_option("--prime", p, "odd prime")->required();
    c_certify->add_option("--out", out, "write the certificate JSON to this file");
    c_certify->add_flag("--skip-delta", skip_delta, "skip the delta smoke run");

    auto* c_rank = app.add_subcommand("rank", "irregularity index report");
    c_rank->add_option("--prime", p, "odd prime")->required();

    auto* c_series = app.add_subcommand("series", "binomial series checks");
    c_series->add_option("--prime", p, "odd prime")->required();
    c_series->add_option("--theta", theta_text, "group-ring element, comma-separated coefficients")
        ->required();
    c_series->add_option("--deg", deg, "truncation degree");
    c_series->add_option("--check", check, "pthpower | integrality | bounds");
    c_series->add_option("--csv", csv, "dump exact coefficients to this CSV file");

    auto* c_delta = app.add_subcommand("delta", "build a delta certificate");
    c_delta->add_option("--prime", p, "odd prime")->required();
    c_delta->add_option("--weight", w, "weight budget");
    c_delta->add_option("--deg", deg, "series truncation degree");
    c_delta->add_option("--seed", seed, "deterministic seed");
    c_delta->add_option("--out", out, "write the certificate JSON to this file");

    auto* c_siegel = app.add_subcommand("siegel", "solve a seeded random instance");
    c_siegel->add_option("--rows", rows, "row count");
    c_siegel->add_option("--cols", cols, "column count");
    c_siegel->add_option("--max-entry", max_entry, "entry magnitude bound");
    c_siegel->add_option("--seed", seed, "deterministic seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (c_certify->parsed()) return run_certify(p, out, skip_delta);
        if (c_rank->parsed()) return run_rank(p);
        if (c_series->parsed()) return run_series(p, theta_text, deg, check, csv);
        if (c_delta->parsed()) return run_delta(p, w, deg, seed, out);
        if (c_siegel->parsed()) return run_siegel(rows, cols, max_entry, seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
