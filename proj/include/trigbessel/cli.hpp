#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "trigbessel/balanced.hpp"
#include "trigbessel/experiments.hpp"
#include "trigbessel/specfun.hpp"

namespace trigbessel::cli {

using json = nlohmann::json;

enum class Format { json, csv, text };

inline const char* to_string(Format f)
{
    switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::text: return "text";
    }
    return "?";
}

struct RunConfig {
    std::string command;
    json params = json::object();
    std::string out_path;
    Format format = Format::json;
    std::uint64_t seed = experiments::ExperimentConfig{}.seed;
    double max_x = experiments::ExperimentConfig{}.max_x;
    int max_schedule_log2 = experiments::ExperimentConfig{}.max_schedule_log2;
    double cap = experiments::ExperimentConfig{}.cap;

    [[nodiscard]] json to_json() const
    {
        return {{"command", command}, {"params", params}, {"out_path", out_path}, {"format", to_string(format)},
                {"seed", seed},       {"max_x", max_x},   {"max_schedule_log2", max_schedule_log2}, {"cap", cap}};
    }

    [[nodiscard]] experiments::ExperimentConfig experiment_config() const
    {
        experiments::ExperimentConfig c;
        c.seed = seed;
        c.max_x = max_x;
        c.max_schedule_log2 = max_schedule_log2;
        c.cap = cap;
        return c;
    }
};

namespace detail {

inline std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline experiments::SweepSpec parse_sweep(const std::string& text)
{
    auto colon = text.find(':');
    if (colon == std::string::npos) throw ValidationError("sweep must look like lo:hi");
    try {
        std::size_t p1 = 0, p2 = 0;
        int lo = std::stoi(text.substr(0, colon), &p1);
        int hi = std::stoi(text.substr(colon + 1), &p2);
        if (p1 != colon || p2 != text.size() - colon - 1) throw ValidationError("");
        return {lo, hi};
    } catch (const std::exception&) {
        throw ValidationError("sweep must look like lo:hi, got '" + text + "'");
    }
}

// Writes to a sibling temp file and renames, so readers never see a partial file.
inline void write_atomic(const std::string& path, const std::string& payload)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot open output file '" + path + "'");
        f << payload;
        f.flush();
        if (!f) {
            f.close();
            fs::remove(tmp);
            throw ValidationError("write failed for '" + path + "'");
        }
    }
    fs::rename(tmp, target);
}

inline std::string with_config_comment(const RunConfig& rc, const std::string& body) { return "# config " + rc.to_json().dump() + "\n" + body; }

struct Outcome {
    std::string payload;
    bool passed = true;
};

inline Outcome report_outcome(const RunConfig& rc, const experiments::IdentityReport& rep)
{
    json j = rep.to_json();
    j["config"] = rc.to_json();
    return {j.dump(2) + "\n", rep.passed};
}

}  // namespace detail

// Parses argv (without the program name) and runs one subcommand.
// Exit codes: 0 success or pass, 1 identity failure, 2 usage or parameter error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"trigbessel: trigonometric lattice sums, Bessel series and growth probes", "trigbessel"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", experiments::kVersion);

    RunConfig rc;
    std::string format_text;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", rc.out_path, "write the report here instead of stdout");
        sub->add_option("--format", format_text, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--seed", rc.seed, "RNG seed");
        sub->add_option("--max-x", rc.max_x, "ceiling on x for probes and checks");
        sub->add_option("--max-schedule", rc.max_schedule_log2, "ceiling on log2 of the truncation size");
        sub->add_option("--cap", rc.cap, "absolute error cap for the trend rule");
    };

    // specfun-eval
    std::string fn = "j";
    int order = 0;
    std::optional<int> twice_order;
    double z = 1.0;
    auto* sf = app.add_subcommand("specfun-eval", "evaluate a Bessel-type function");
    sf->add_option("--fn", fn, "j, y, k, icomb, dj, dicomb, t32, t32-composed")
        ->check(CLI::IsMember({"j", "y", "k", "icomb", "dj", "dicomb", "t32", "t32-composed"}, CLI::ignore_case));
    sf->add_option("--order", order, "integer order");
    sf->add_option("--twice-order", twice_order, "2*nu for J at half-integer order");
    sf->add_option("--z", z, "argument")->required();
    common(sf);

    // verify-entry
    std::string entry_id = "entry1", sweep_text = "6:12";
    double theta = 0.3, sigma = 0.3, x = 2.5;
    auto* ve = app.add_subcommand("verify-entry", "check an entry identity against its Bessel series");
    ve->add_option("--id", entry_id, "entry1 or entry2")->check(CLI::IsMember({"entry1", "entry2"}, CLI::ignore_case));
    ve->add_option("--theta", theta)->required();
    ve->add_option("--x", x)->required();
    ve->add_option("--sweep", sweep_text, "lo:hi, log2 truncation sizes");
    common(ve);

    // verify-balanced
    std::string bal_kind = "bi";
    long long cells = 10;
    auto* vb = app.add_subcommand("verify-balanced", "check a balanced identity");
    vb->add_option("--kind", bal_kind, "bi, ti, tt (k = 0) or k1 (pointwise k = 1)")->check(CLI::IsMember({"bi", "ti", "tt", "k1"}, CLI::ignore_case));
    vb->add_option("--sigma", sigma);
    vb->add_option("--theta", theta);
    vb->add_option("--x", x);
    vb->add_option("--sweep", sweep_text, "lo:hi, log2 truncation sizes");
    vb->add_option("--cells", cells, "number of random cells for k1");
    common(vb);

    // verify-decomposition
    std::string dec_id = "cc";
    long long p = 5, q = 7, a = 1, b = 1;
    auto* vd = app.add_subcommand("verify-decomposition", "check a character decomposition exactly");
    vd->add_option("--id", dec_id, "cc, cs, ss, floor_cos, floor_sin, sine_chars, odd_orthogonality");
    vd->add_option("--p", p);
    vd->add_option("--q", q);
    vd->add_option("--a", a);
    vd->add_option("--b", b);
    vd->add_option("--x", x);
    common(vd);

    // verify-riesz
    auto* vr = app.add_subcommand("verify-riesz", "check the k = 2 Riesz identity over residue classes");
    vr->add_option("--p", p);
    vr->add_option("--q", q);
    vr->add_option("--a", a);
    vr->add_option("--b", b);
    vr->add_option("--x", x)->required();
    vr->add_option("--sweep", sweep_text, "lo:hi, log2 truncation sizes");
    common(vr);

    // growth
    std::string growth_kind = "delta", exponent_text = "1/4";
    double x_max = 1e6, x_min = 10;
    long long points = 200;
    int k = 3;
    auto* gr = app.add_subcommand("growth", "probe |E(x)|/x^a on a jittered grid");
    gr->add_option("--kind", growth_kind, "delta, p_circle, d_chi2, dstar_chi2, ss_quarter, dk");
    gr->add_option("--exponent", exponent_text, "rational exponent, e.g. 1/4 or 0.25")->required();
    gr->add_option("--xmax", x_max)->required();
    gr->add_option("--xmin", x_min);
    gr->add_option("--points", points);
    gr->add_option("--k", k, "number of characters for dk");
    common(gr);

    // exponents
    auto* exps = app.add_subcommand("exponents", "Omega and O exponents for the k-fold sine sums");
    exps->add_option("--k", k)->required();
    common(exps);

    // expand
    std::string expand_kind = "J", s_text = "1/2", w_text = "1/2", sigma_sign = "plus", theta_sign = "plus";
    int alpha = 1, beta = 1;
    bool x_integer = false;
    auto* ex = app.add_subcommand("expand", "symbolic mixed partial of a cell term");
    ex->add_option("--kind", expand_kind, "J, Icomb or T")->check(CLI::IsMember({"j", "icomb", "t"}, CLI::ignore_case));
    ex->add_option("--alpha", alpha);
    ex->add_option("--beta", beta);
    ex->add_option("--s", s_text);
    ex->add_option("--w", w_text);
    ex->add_option("--sigma-sign", sigma_sign)->check(CLI::IsMember({"plus", "minus"}));
    ex->add_option("--theta-sign", theta_sign)->check(CLI::IsMember({"plus", "minus"}));
    ex->add_flag("--x-integer", x_integer, "apply the integer-x admissibility bound");
    common(ex);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << experiments::kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    rc.command = sub->get_name();
    const bool explicit_format = !format_text.empty();
    if (explicit_format) rc.format = format_text == "csv" ? Format::csv : format_text == "text" ? Format::text : Format::json;

    detail::Outcome outcome;
    try {
        auto cfg = rc.experiment_config();
        if (sub == sf) {
            std::string f = detail::lower(fn);
            rc.params = {{"fn", f}, {"order", order}, {"z", z}};
            if (twice_order) rc.params["twice_order"] = *twice_order;
            specfun::EvalReport r;
            if (f == "j") r = twice_order ? specfun::bessel_j(specfun::BesselOrder::half(*twice_order), z) : specfun::bessel_j(order, z);
            else if (f == "y") r = specfun::bessel_y(order, z);
            else if (f == "k") r = specfun::bessel_k_mod(order, z);
            else if (f == "icomb") r = specfun::i_comb(order, z);
            else if (f == "dj") r = specfun::d_bessel(specfun::DerivKind::J, order, z);
            else if (f == "dicomb") r = specfun::d_bessel(specfun::DerivKind::Icomb, order, z);
            else if (f == "t32") r = specfun::t_three_half(z);
            else r = specfun::t_three_half_composed(z);
            if (!explicit_format) rc.format = Format::json;
            if (rc.format != Format::json) throw ValidationError("specfun-eval supports --format json only");
            json j = {{"fn", f},           {"value", r.value}, {"est_abs_error", r.est_abs_error}, {"method", specfun::to_string(r.method)},
                      {"config", rc.to_json()}, {"versions", {{"trigbessel", experiments::kVersion}}}};
            outcome.payload = j.dump(2) + "\n";
        } else if (sub == ve || sub == vb || sub == vr) {
            if (explicit_format && rc.format != Format::json) throw ValidationError(rc.command + " supports --format json only");
            rc.format = Format::json;
            auto sweep = detail::parse_sweep(sweep_text);
            experiments::IdentityReport rep;
            if (sub == ve) {
                auto id = detail::lower(entry_id) == "entry1" ? experiments::IdentityId::ENTRY1 : experiments::IdentityId::ENTRY2;
                rc.params = {{"id", detail::lower(entry_id)}, {"theta", theta}, {"x", x}, {"sweep", sweep_text}};
                rep = experiments::verify_identity(id, {{"theta", theta}, {"x", x}}, sweep, cfg);
            } else if (sub == vb) {
                std::string kind = detail::lower(bal_kind);
                if (kind == "k1") {
                    rc.params = {{"kind", kind}, {"cells", cells}};
                    rep = experiments::verify_identity(experiments::IdentityId::BALANCED_K1,
                                                       {{"cells", static_cast<double>(cells)}, {"seed", static_cast<double>(rc.seed)}}, sweep, cfg);
                } else {
                    auto id = kind == "bi" ? experiments::IdentityId::BI_K0 : kind == "ti" ? experiments::IdentityId::TI_K0 : experiments::IdentityId::TT_K0;
                    rc.params = {{"kind", kind}, {"sigma", sigma}, {"theta", theta}, {"x", x}, {"sweep", sweep_text}};
                    rep = experiments::verify_identity(id, {{"sigma", sigma}, {"theta", theta}, {"x", x}}, sweep, cfg);
                }
            } else {
                rc.params = {{"p", p}, {"q", q}, {"a", a}, {"b", b}, {"x", x}, {"sweep", sweep_text}};
                rep = experiments::verify_riesz_k2(p, q, a, b, x, sweep, cfg);
            }
            outcome = detail::report_outcome(rc, rep);
        } else if (sub == vd) {
            if (explicit_format && rc.format != Format::json) throw ValidationError("verify-decomposition supports --format json only");
            rc.format = Format::json;
            auto id = experiments::decomposition_from_string(dec_id);
            rc.params = {{"id", experiments::to_string(id)}, {"p", p}, {"q", q}, {"a", a}, {"b", b}, {"x", x}};
            outcome = detail::report_outcome(rc, experiments::verify_decomposition(id, {p, q, a, b, x}, cfg));
        } else if (sub == gr) {
            auto kind = experiments::growth_from_string(growth_kind);
            Rational e = Rational::parse(exponent_text);
            rc.params = {{"kind", experiments::to_string(kind)}, {"exponent", e.str()}, {"xmax", x_max}, {"xmin", x_min}, {"points", points}, {"k", k}};
            if (!explicit_format) rc.format = Format::csv;
            if (rc.format == Format::text) throw ValidationError("growth supports --format csv or json");
            auto res = experiments::growth_probe(kind, e, x_max, points, cfg, {x_min, k});
            if (rc.format == Format::csv) {
                outcome.payload = detail::with_config_comment(rc, res.to_csv());
            } else {
                json j = res.to_json();
                j["config"] = rc.to_json();
                j["decades_with_new_max"] = res.decades_with_new_max();
                j["max_ratio_over_log"] = res.max_ratio_over_log();
                outcome.payload = j.dump(2) + "\n";
            }
        } else if (sub == exps) {
            rc.params = {{"k", k}};
            if (!explicit_format) rc.format = Format::text;
            if (rc.format == Format::csv) throw ValidationError("exponents supports --format text or json");
            auto ep = arith::cn_exponents(k);
            if (rc.format == Format::text) {
                outcome.payload = "omega=" + ep.omega_exp.str() + " bigO=" + ep.bigO_exp.str() + "\n";
            } else {
                json j = {{"omega", ep.omega_exp.str()}, {"bigO", ep.bigO_exp.str()}, {"config", rc.to_json()}};
                outcome.payload = j.dump(2) + "\n";
            }
        } else {
            std::string kl = detail::lower(expand_kind);
            auto kind = kl == "j" ? balanced::BesselKind::J : kl == "icomb" ? balanced::BesselKind::Icomb : balanced::BesselKind::T;
            Rational s = Rational::parse(s_text), w = Rational::parse(w_text);
            auto ss = sigma_sign == "plus" ? balanced::ShiftSign::plus : balanced::ShiftSign::minus;
            auto ts = theta_sign == "plus" ? balanced::ShiftSign::plus : balanced::ShiftSign::minus;
            rc.params = {{"kind", balanced::to_string(kind)}, {"alpha", alpha}, {"beta", beta}, {"s", s.str()}, {"w", w.str()},
                         {"sigma_sign", sigma_sign}, {"theta_sign", theta_sign}, {"x_integer", x_integer}};
            if (!explicit_format) rc.format = Format::text;
            if (rc.format == Format::csv) throw ValidationError("expand supports --format text or json");
            auto e = balanced::expand_mixed_partial(kind, alpha, beta, s, w, ss, ts);
            bool admissible = balanced::mixed_partial_admissible(alpha, beta, s, w, x_integer);
            if (rc.format == Format::text) {
                outcome.payload = balanced::pretty(e) + (admissible ? "admissible\n" : "not admissible\n");
            } else {
                json terms = json::array();
                for (const auto& t : e.terms)
                    terms.push_back({{"coeff", t.coeff.str()}, {"pi_power", t.pi_power}, {"sqrtx_power", t.x_power}, {"kind", balanced::to_string(t.kind)},
                                     {"order", t.order}, {"gamma", t.gamma.str()}, {"delta", t.delta.str()},
                                     {"sigma_sign", t.sigma_sign == balanced::ShiftSign::plus ? "plus" : "minus"},
                                     {"theta_sign", t.theta_sign == balanced::ShiftSign::plus ? "plus" : "minus"}});
                json j = {{"main_gamma", e.main_gamma.str()}, {"main_delta", e.main_delta.str()}, {"terms", terms},
                          {"admissible", admissible}, {"config", rc.to_json()}};
                outcome.payload = j.dump(2) + "\n";
            }
        }
        // Text payloads carry the config as a trailing comment line.
        if (rc.format == Format::text) outcome.payload += "# config " + rc.to_json().dump() + "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (rc.out_path.empty()) out << outcome.payload;
        else detail::write_atomic(rc.out_path, outcome.payload);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return outcome.passed ? 0 : 1;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace trigbessel::cli
