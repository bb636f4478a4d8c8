#include "betaimex/coefficients.hpp"
#include "betaimex/experiments.hpp"
#include "betaimex/multiplier.hpp"
#include "betaimex/output.hpp"
#include "betaimex/rational.hpp"
#include "betaimex/stability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

using namespace betaimex;
namespace fs = std::filesystem;

enum ExitCode { kCompleted = 0, kInternalError = 1, kInstability = 2 };

// JSON config files: top-level keys set global options, an object under a subcommand name sets its options.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        return collect(app, default_also).dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
        std::vector<CLI::ConfigItem> items;
        flatten(j, "", {}, items);
        return items;
    }

private:
    static nlohmann::json collect(const CLI::App* app, bool default_also) {
        nlohmann::json j = nlohmann::json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
            const std::string name = opt->get_lnames()[0];
            if (opt->get_expected_max() != 0) {
                if (opt->count() == 1) j[name] = opt->results().at(0);
                else if (opt->count() > 1) j[name] = opt->results();
                else if (default_also && !opt->get_default_str().empty()) j[name] = opt->get_default_str();
            } else if (opt->count() > 0 || default_also) {
                j[name] = opt->count() > 0;
            }
        }
        for (const CLI::App* sub : app->get_subcommands({})) j[sub->get_name()] = collect(sub, default_also);
        return j;
    }

    static std::string scalar(const nlohmann::json& v, const std::string& name) {
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
        if (v.is_number()) return format_double(v.get<double>());
        if (v.is_string()) return v.get<std::string>();
        throw CLI::ConversionError("unsupported value for config key " + name);
    }

    static void flatten(const nlohmann::json& j, const std::string& name, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        if (j.is_object()) {
            if (!name.empty()) parents.push_back(name);
            for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, it.key(), parents, out);
            return;
        }
        CLI::ConfigItem item;
        item.name = name;
        item.parents = std::move(parents);
        if (j.is_array()) {
            for (const auto& v : j) item.inputs.push_back(scalar(v, name));
        } else {
            item.inputs.push_back(scalar(j, name));
        }
        out.push_back(std::move(item));
    }
};

struct Globals {
    std::string out = "out";
    std::uint64_t seed = 20240601;
    bool json = false;
};

Json manifest_config(const CLI::App& sub, const Globals& g) {
    Json j;
    j["out"] = g.out;
    j["seed"] = g.seed;
    for (const CLI::Option* opt : sub.get_options({})) {
        if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
        const std::string name = opt->get_lnames()[0];
        if (opt->get_expected_max() == 0) {
            j[name] = opt->count() > 0;
        } else if (opt->count() > 0) {
            const auto& r = opt->results();
            j[name] = r.size() == 1 ? Json(r[0]) : Json(r);
        } else if (!opt->get_default_str().empty()) {
            j[name] = opt->get_default_str();
        }
    }
    return j;
}

void finish(const CLI::App& sub, const Globals& g, const fs::path& dir, std::vector<std::string> files) {
    write_manifest(dir, sub.get_name(), manifest_config(sub, g), g.seed, files);
}

void print_summary(const Globals& g, const Json& j, const std::string& text) {
    if (g.json) std::cout << j.dump(2) << '\n';
    else std::cout << text;
}

Json coefficients_json(const SchemeCoefficients& s) {
    Json j;
    j["k"] = s.k;
    j["beta"] = s.beta;
    j["a"] = s.a;
    j["b"] = s.b;
    j["c"] = s.c;
    j["d"] = s.d;
    j["eta"] = s.eta;
    return j;
}

Json coefficients_json(const ExactCoefficients& s) {
    auto strs = [](const std::vector<Rational>& v) {
        std::vector<std::string> o;
        for (const auto& x : v) o.push_back(to_string(x));
        return o;
    };
    Json j;
    j["k"] = s.a.size() - 1;
    j["beta"] = to_string(s.beta);
    j["a"] = strs(s.a);
    j["b"] = strs(s.b);
    j["c"] = strs(s.c);
    j["d"] = strs(s.d);
    j["eta"] = to_string(s.eta);
    return j;
}

std::string coefficients_csv(const Json& j) {
    std::ostringstream os;
    os << "family,q,value\n";
    for (const char* fam : {"a", "b", "c", "d"}) {
        const auto& v = j.at(fam);
        for (std::size_t q = 0; q < v.size(); ++q) {
            os << fam << ',' << q << ',';
            if (v[q].is_string()) os << v[q].get<std::string>();
            else os << format_double(v[q].get<double>());
            os << '\n';
        }
    }
    os << "eta,0,";
    if (j.at("eta").is_string()) os << j.at("eta").get<std::string>();
    else os << format_double(j.at("eta").get<double>());
    os << '\n';
    return os.str();
}

std::string coefficients_text(const Json& j) {
    std::ostringstream os;
    auto show = [&](const Json& v) {
        if (v.is_string()) os << v.get<std::string>();
        else os << format_double(v.get<double>());
    };
    os << "k = " << j.at("k") << ", beta = ";
    show(j.at("beta"));
    os << '\n';
    for (const char* fam : {"a", "b", "c", "d"}) {
        os << fam << ':';
        for (const auto& v : j.at(fam)) {
            os << ' ';
            show(v);
        }
        os << '\n';
    }
    os << "eta: ";
    show(j.at("eta"));
    os << '\n';
    return os.str();
}

Json certificate_json(const CertificateReport& r) {
    Json j;
    j["k"] = r.k;
    j["beta"] = r.beta;
    j["pass"] = r.pass;
    j["resultant_AC"] = r.resultant_AC;
    j["resultant_DC"] = r.resultant_DC;
    j["closed_form_resultant_AC"] = r.closed_form_resultant_AC;
    j["closed_form_resultant_DC"] = r.closed_form_resultant_DC;
    j["max_root_modulus_C"] = r.max_root_modulus_C;
    j["min_f"] = r.min_f;
    j["argmin_f"] = r.argmin_f;
    j["min_h"] = r.min_h;
    j["argmin_h"] = r.argmin_h;
    if (r.failure_witness) {
        j["failure_witness"] = {{"polynomial", std::string(1, r.failure_witness->polynomial)},
                                {"y", r.failure_witness->y},
                                {"value", r.failure_witness->value}};
    } else {
        j["failure_witness"] = nullptr;
    }
    return j;
}

std::vector<double> parse_grid(const std::string& spec) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !is.eof())
        throw CLI::ValidationError("--grid", "expected lo:hi:step, got '" + spec + "'");
    return beta_grid(lo, hi, step);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shifted BDF/IMEX schemes: coefficients, stability, certificates and phase-field experiments"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file mirroring the command-line flags");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Random seed for stochastic initial data")->capture_default_str();
    app.add_flag("--json", g.json, "Print the summary as JSON");

    // coeffs
    int ck = 2;
    double cbeta = 1.0;
    bool cexact = false, ccsv = false;
    auto* coeffs = app.add_subcommand("coeffs", "Print the coefficient record for (k, beta)");
    coeffs->add_option("--k", ck, "Order 2..5")->required();
    coeffs->add_option("--beta", cbeta, "Shift parameter >= 1")->required();
    coeffs->add_flag("--exact", cexact, "Exact rational arithmetic (beta taken as the exact binary value)");
    coeffs->add_flag("--csv", ccsv, "Print CSV instead of text");

    // stability
    int sk = 2;
    double sbeta = 1.0;
    std::vector<double> swin{-12.0, 4.0, -8.0, 8.0};
    std::vector<int> sres{600, 600};
    bool sascii = false;
    auto* stab = app.add_subcommand("stability", "Scan the absolute-stability region");
    stab->add_option("--k", sk, "Order 2..5")->required();
    stab->add_option("--beta", sbeta, "Shift parameter >= 1")->required();
    stab->add_option("--window", swin, "re_lo,re_hi,im_lo,im_hi")->delimiter(',')->expected(4)->capture_default_str();
    stab->add_option("--res", sres, "NX,NY")->delimiter(',')->expected(2)->capture_default_str();
    stab->add_flag("--ascii", sascii, "Write a plain (P2) graymap");

    // verify
    int vk = 2;
    std::optional<double> vbeta;
    std::string vgrid;
    auto* verify = app.add_subcommand("verify", "Check the multiplier certificate");
    verify->add_option("--k", vk, "Order 2..5")->required();
    auto* vbeta_opt = verify->add_option("--beta", vbeta, "Single shift parameter");
    auto* vgrid_opt = verify->add_option("--grid", vgrid, "Sweep lo:hi:step");
    vbeta_opt->excludes(vgrid_opt);

    // converge
    ConvergenceConfig cc;
    auto* conv = app.add_subcommand("converge", "Manufactured-solution convergence test");
    conv->add_option("--k", cc.k, "Order 2..5")->capture_default_str();
    conv->add_option("--beta", cc.beta, "Shift parameter >= 1")->capture_default_str();
    conv->add_option("--dts", cc.dts, "Strictly decreasing time steps")->delimiter(',')->capture_default_str();
    conv->add_option("--n", cc.n, "Grid points per direction")->capture_default_str();
    conv->add_option("--T", cc.T, "Final time")->capture_default_str();

    // allen-cahn
    AllenCahnConfig ac;
    bool ac_small = false;
    std::string ac_profile = "indicator";
    std::optional<int> ac_n;
    std::optional<double> ac_T;
    auto* allen = app.add_subcommand("allen-cahn", "Shrinking circle radius against sqrt(R0^2 - 2t)");
    allen->add_option("--k", ac.k, "Order 1..5 (1 is the first-order baseline)")->capture_default_str();
    allen->add_option("--beta", ac.beta, "Shift parameter >= 1")->capture_default_str();
    allen->add_flag("--small", ac_small, "Reduced preset: 256^2 grid, T = 500");
    allen->add_option("--n", ac_n, "Grid points per direction (default 512, or 256 with --small)");
    allen->add_option("--T", ac_T, "Final time (default 1000, or 500 with --small)");
    allen->add_option("--dt", ac.dt, "Time step")->capture_default_str();
    allen->add_option("--observe-every", ac.observe_every, "Time between radius samples")->capture_default_str();
    allen->add_option("--profile", ac_profile, "Initial circle: indicator or tanh")
        ->check(CLI::IsMember({"indicator", "tanh"}))
        ->capture_default_str();

    // cahn-hilliard
    int ch_k = 2;
    double ch_beta = 1.0;
    bool ch_small = false, ch_reference = false;
    std::optional<int> ch_n;
    std::optional<double> ch_dt, ch_T, ch_ref_dt;
    auto* cahn = app.add_subcommand("cahn-hilliard", "Spinodal decomposition energy and stability verdict");
    cahn->add_option("--k", ch_k, "Order 1..5")->capture_default_str();
    cahn->add_option("--beta", ch_beta, "Shift parameter >= 1")->capture_default_str();
    cahn->add_flag("--small", ch_small, "Reduced preset: 64^2 grid, eps = 0.04, dt = 2e-6, T = 6e-3");
    cahn->add_flag("--reference", ch_reference, "Also compute the (k = 4, beta = 1) fine-step reference");
    cahn->add_option("--n", ch_n, "Grid points per direction");
    cahn->add_option("--dt", ch_dt, "Time step");
    cahn->add_option("--T", ch_T, "Final time");
    cahn->add_option("--reference-dt", ch_ref_dt, "Reference time step (must divide dt)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kCompleted : kInternalError;
    }

    try {
        const fs::path out = g.out;
        if (*coeffs) {
            const SchemeOrder k(ck);
            Json j;
            if (cexact) {
                j = coefficients_json(exact::coefficients(k, to_rational(cbeta)));
            } else {
                j = coefficients_json(scheme_coefficients(k, ShiftParameter(cbeta)));
            }
            if (g.json) std::cout << j.dump(2) << '\n';
            else if (ccsv) std::cout << coefficients_csv(j);
            else std::cout << coefficients_text(j);
            for (const auto& note : admissibility_notes(k, cbeta)) std::cerr << "note: " << note << '\n';
            return kCompleted;
        }
        if (*stab) {
            const Window w{swin[0], swin[1], swin[2], swin[3]};
            if (!(w.re_lo < w.re_hi && w.im_lo < w.im_hi)) throw std::invalid_argument("--window must be nonempty");
            if (sres[0] < 1 || sres[1] < 1) throw std::invalid_argument("--res entries must be positive");
            const auto grid = scan_region(scheme_coefficients(SchemeOrder(sk), ShiftParameter(sbeta)), w, sres[0],
                                          sres[1]);
            ensure_directory(out);
            write_pgm(out / "stability.pgm", grid, !sascii);
            Json j;
            j["k"] = sk;
            j["beta"] = sbeta;
            j["window"] = {w.re_lo, w.re_hi, w.im_lo, w.im_hi};
            j["resolution"] = {grid.nx, grid.ny};
            j["area"] = grid.area;
            write_json(out / "stability.json", j);
            finish(*stab, g, out, {"stability.pgm", "stability.json"});
            print_summary(g, j, "stable area " + format_double(grid.area) + " written to " + out.string() + "\n");
            return kCompleted;
        }
        if (*verify) {
            const SchemeOrder k(vk);
            std::vector<double> betas;
            if (!vgrid.empty()) betas = parse_grid(vgrid);
            else if (vbeta) betas = {*vbeta};
            else throw std::invalid_argument("verify needs --beta or --grid");
            std::vector<CertificateReport> reps;
            if (vk == 5) {
                reps = verify_k5_range(betas);
            } else {
                for (double b : betas) reps.push_back(verify_certificate(k, ShiftParameter(b)));
            }
            Json arr = Json::array();
            bool all = true;
            std::ostringstream text;
            for (const auto& r : reps) {
                arr.push_back(certificate_json(r));
                all = all && r.pass;
                text << "k=" << r.k << " beta=" << format_double(r.beta) << (r.pass ? " pass" : " FAIL")
                     << " min_f=" << format_double(r.min_f) << " min_h=" << format_double(r.min_h)
                     << " rmax=" << format_double(r.max_root_modulus_C) << '\n';
            }
            ensure_directory(out);
            write_json(out / "certificates.json", arr);
            finish(*verify, g, out, {"certificates.json"});
            print_summary(g, arr, text.str());
            return all ? kCompleted : kInstability;
        }
        if (*conv) {
            const auto rep = run_convergence(cc);
            auto files = emit_outputs(rep, out);
            finish(*conv, g, out, files);
            std::ostringstream text;
            for (const auto& e : rep.entries)
                text << "dt=" << format_double(e.dt) << " error=" << format_double(e.error)
                     << (e.completed ? "" : " (" + e.failure + ")") << '\n';
            text << "slope=" << format_double(rep.slope) << '\n';
            print_summary(g, to_json(rep), text.str());
            for (const auto& e : rep.entries)
                if (!e.completed) return kInstability;
            return kCompleted;
        }
        if (*allen) {
            AllenCahnConfig c = ac_small ? AllenCahnConfig::small() : AllenCahnConfig::full_scale();
            c.k = ac.k;
            c.beta = ac.beta;
            c.dt = ac.dt;
            c.observe_every = ac.observe_every;
            if (ac_n) c.n = *ac_n;
            if (ac_T) c.T = *ac_T;
            c.profile = ac_profile == "tanh" ? InitialProfile::tanh : InitialProfile::indicator;
            const auto rep = run_allen_cahn_radius(c);
            auto files = emit_outputs(rep, out);
            finish(*allen, g, out, files);
            std::ostringstream text;
            if (rep.completed) text << "completed; max relative radius deviation " << format_double(rep.max_relative_deviation) << '\n';
            else text << "blow-up for (k=" << rep.k << ", beta=" << format_double(rep.beta) << ") at step "
                      << *rep.blow_up_step << ": " << rep.blow_up_reason << '\n';
            print_summary(g, to_json(rep), text.str());
            return rep.completed ? kCompleted : kInstability;
        }
        if (*cahn) {
            CahnHilliardConfig c = ch_small ? CahnHilliardConfig::small() : CahnHilliardConfig::full_scale();
            c.k = ch_k;
            c.beta = ch_beta;
            c.seed = g.seed;
            if (ch_n) c.n = *ch_n;
            if (ch_dt) c.dt = *ch_dt;
            if (ch_T) c.T = *ch_T;
            if (ch_ref_dt) c.reference_dt = *ch_ref_dt;
            std::vector<std::string> files;
            std::optional<ReferenceTrajectory> ref;
            if (ch_reference) {
                ref = cahn_hilliard_reference(c);
                for (auto& f : emit_outputs(*ref, out / "reference")) files.push_back("reference/" + f);
            }
            const auto rep = run_cahn_hilliard(c, ref ? &*ref : nullptr);
            for (auto& f : emit_outputs(rep, out)) files.push_back(f);
            finish(*cahn, g, out, files);
            std::ostringstream text;
            text << "(k=" << rep.k << ", beta=" << format_double(rep.beta) << ") " << (rep.stable ? "stable" : "unstable");
            if (rep.blow_up_step) text << ", blow-up at step " << *rep.blow_up_step;
            text << "; final energy " << format_double(rep.energy.back()) << '\n';
            print_summary(g, to_json(rep), text.str());
            return rep.stable ? kCompleted : kInstability;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternalError;
    }
    return kInternalError;
}
