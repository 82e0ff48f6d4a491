// chanfid: command-line front end. The run report goes to stdout, everything
// else to stderr. Exit codes: 0 ok, 1 certificate/inequality failure, 2 bad
// input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "chanfid/bounds.hpp"
#include "chanfid/discrimination.hpp"
#include "chanfid/fidelity.hpp"
#include "chanfid/io.hpp"
#include "chanfid/preprocessing.hpp"
#include "chanfid/qecc.hpp"

using namespace chanfid;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct Failure {
    std::string what;
};

// --tol may tighten a default but never loosen it.
double effective_tol(double requested, double library_default) {
    if (std::isfinite(requested) && requested > library_default) {
        std::cerr << "warning: --tol " << requested << " is looser than the default "
                  << library_default << "; keeping the default\n";
    }
    return std::min(requested, library_default);
}

struct Loaded {
    Json doc;
    Json entry;
};

Loaded load(const std::string& role, const std::string& path) {
    Json doc = io::read_json_file(path);
    return {doc, Json{{"role", role}, {"fnv1a64", io::digest(doc)}}};
}

Json pair_json(std::pair<std::size_t, std::size_t> p) { return Json::array({p.first, p.second}); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"channel fidelity toolkit"};
    app.require_subcommand(1);

    std::string a_path, b_path;
    double tol = std::numeric_limits<double>::infinity();  // no override
    std::uint64_t seed = 0;
    int budget = EstimatorBudget{}.restarts;
    std::size_t grid = HamiltonianEnsemble{}.grid_points;
    int nmax = 20;
    std::size_t din = 2, dout = 2, rank = 1;

    io::RunReport report;
    std::function<void()> run;

    auto add_tol = [&](CLI::App* sub) {
        sub->add_option("--tol", tol, "tighten the certificate tolerance")->check(CLI::NonNegativeNumber);
    };

    auto* fid = app.add_subcommand("fidelity", "channel fidelity of two channels");
    fid->add_option("A", a_path)->required();
    fid->add_option("B", b_path)->required();
    add_tol(fid);
    fid->callback([&] {
        run = [&] {
            auto a = load("A", a_path), b = load("B", b_path);
            report.inputs = {a.entry, b.entry};
            const auto r = channel_fidelity(io::parse_channel(a.doc), io::parse_channel(b.doc));
            const double t = effective_tol(tol, kRouteAgreement);
            report.tolerances = {{"route_agreement", t}};
            report.results = {{"value", r.value}, {"route", std::string(to_string(r.route))},
                              {"residual", r.residual}};
            if (r.residual > t) throw Failure{"route residual exceeds tolerance"};
        };
    });

    auto* cho = app.add_subcommand("choi", "Choi operator and normalized Choi state");
    cho->add_option("A", a_path)->required();
    cho->callback([&] {
        run = [&] {
            auto a = load("A", a_path);
            report.inputs = {a.entry};
            report.results = {{"document", io::choi_document(choi(io::parse_channel(a.doc)))}};
        };
    });

    auto* kr = app.add_subcommand("kraus", "minimal Kraus set recovered from the Choi operator");
    kr->add_option("A", a_path)->required();
    add_tol(kr);
    kr->callback([&] {
        run = [&] {
            auto a = load("A", a_path);
            report.inputs = {a.entry};
            const auto ch = io::parse_channel(a.doc);
            const auto c = choi(ch);
            const auto back = kraus_from_choi(c);
            const double dist = max_abs(choi(back).matrix() - c.matrix());
            const double t = effective_tol(tol, 1e-9);
            report.tolerances = {{"choi_round_trip", t}};
            report.results = {{"document", io::kraus_document(back)}, {"choi_round_trip_residual", dist}};
            if (dist > t) throw Failure{"Kraus round trip misses the Choi operator"};
        };
    });

    auto* props = app.add_subcommand("props", "CF1-CF7 property checks around a channel pair");
    props->add_option("A", a_path)->required();
    props->add_option("B", b_path)->required();
    props->add_option("--seed", seed, "seed for the auxiliary random channels");
    add_tol(props);
    props->callback([&] {
        run = [&] {
            auto a = load("A", a_path), b = load("B", b_path);
            report.inputs = {a.entry, b.entry};
            report.seed = seed;
            const auto checks = cf_property_suite(
                seeded_property_inputs(io::parse_channel(a.doc), io::parse_channel(b.doc), seed));
            Json rows = Json::array();
            bool ok = true;
            for (const auto& c : checks) {
                const bool pass = c.holds_within(tol);
                ok = ok && pass;
                rows.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs},
                                {"tolerance", std::min(tol, c.tolerance)}, {"passed", pass}});
            }
            if (std::isfinite(tol)) report.tolerances = {{"cap", tol}};
            report.results = {{"checks", rows}, {"all_passed", ok}};
            if (!ok) throw Failure{"a property check failed"};
        };
    });

    auto* bnd = app.add_subcommand("bounds", "fidelity / cb-distance inequality chains");
    bnd->add_option("A", a_path)->required();
    bnd->add_option("B", b_path)->required();
    bnd->add_option("--budget", budget, "random restarts of the estimators")->check(CLI::NonNegativeNumber);
    bnd->add_option("--seed", seed);
    add_tol(bnd);
    bnd->callback([&] {
        run = [&] {
            auto a = load("A", a_path), b = load("B", b_path);
            report.inputs = {a.entry, b.entry};
            report.seed = seed;
            EstimatorBudget eb;
            eb.restarts = budget;
            eb.seed = seed;
            const auto r = bound_suite(io::parse_channel(a.doc), io::parse_channel(b.doc), eb);
            const double slack = effective_tol(tol, kBoundSlack);
            Json rows = Json::array();
            bool ok = true;
            for (const auto& q : r.inequalities) {
                const bool sat = q.lhs <= q.rhs + slack;
                if (q.asserted) ok = ok && sat;
                rows.push_back({{"name", q.name}, {"lhs", q.lhs}, {"rhs", q.rhs},
                                {"satisfied", sat}, {"asserted", q.asserted}});
            }
            report.tolerances = {{"slack", slack}};
            report.results = {{"fid", r.fid},
                              {"choi_trace_distance", r.choi_trace_distance},
                              {"diamond_lb", r.diamond_lb},
                              {"fid_to_identity", r.fid_to_identity},
                              {"diamond_lb_identity", r.diamond_lb_identity},
                              {"offdiag_lb", r.offdiag_lb},
                              {"budget", {{"restarts", eb.restarts}, {"ascent_steps", eb.ascent_steps}}},
                              {"inequalities", rows},
                              {"asserted_hold", ok}};
            if (!ok) throw Failure{"an asserted inequality failed"};
        };
    });

    auto* ham = app.add_subcommand("ham-discriminate", "best probing time for a Hamiltonian ensemble");
    ham->add_option("ensemble", a_path)->required();
    ham->add_option("--grid", grid, "grid points on [0, horizon]")->check(CLI::Range(2, 1 << 20));
    ham->callback([&] {
        run = [&] {
            auto a = load("ensemble", a_path);
            report.inputs = {a.entry};
            auto ens = io::parse_ensemble(a.doc);
            if (ham->count("--grid")) ens.grid_points = grid;
            const auto r = optimize_discrimination(ens);
            Json curve = Json::array();
            for (const auto& [t, f] : r.curve) curve.push_back(Json::array({t, f}));
            report.results = {{"t_opt", r.t_opt}, {"f_opt", r.f_opt}, {"worst_pair", pair_json(r.worst_pair)},
                              {"grid_points", ens.grid_points}, {"curve", curve}};
        };
    });

    auto* acin = app.add_subcommand("acin", "parallel-copy input that separates two qubit unitaries");
    acin->add_option("U1", a_path)->required();
    acin->add_option("U2", b_path)->required();
    acin->add_option("--nmax", nmax)->check(CLI::Range(1, 20));
    add_tol(acin);
    acin->callback([&] {
        run = [&] {
            auto a = load("U1", a_path), b = load("U2", b_path);
            report.inputs = {a.entry, b.entry};
            const auto s = acin_search(io::parse_unitary(a.doc), io::parse_unitary(b.doc), nmax);
            const double t = effective_tol(tol, 1e-9);
            report.tolerances = {{"residual", t}};
            auto excluded = [](const std::vector<HalfPlaneWitness>& w) {
                Json out = Json::array();
                for (const auto& x : w) out.push_back({{"n", x.n}, {"max_gap", x.max_gap}});
                return out;
            };
            if (!s.found) {
                report.results = {{"found", false}, {"n_max", nmax}, {"excluded", excluded(s.excluded)}};
                return;
            }
            const auto& r = *s.found;
            report.results = {{"found", true},
                              {"n0", r.n0},
                              {"theta", r.theta},
                              {"support", r.support},
                              {"weights", r.weights},
                              {"psi", io::to_json(r.psi.amplitudes())},
                              {"residual", r.residual},
                              {"fidelity_after", r.fidelity_after},
                              {"excluded", excluded(r.excluded)}};
            if (r.residual > t) throw Failure{"residual exceeds tolerance"};
        };
    });

    auto* qc = app.add_subcommand("qecc-check", "verify a code against a noise channel");
    qc->add_option("code", a_path)->required();
    qc->add_option("noise", b_path)->required();
    add_tol(qc);
    qc->callback([&] {
        run = [&] {
            auto a = load("code", a_path), b = load("noise", b_path);
            report.inputs = {a.entry, b.entry};
            const auto r = qecc_check(io::parse_code(a.doc), io::parse_channel(b.doc));
            const double t = effective_tol(tol, kLeakageExact);
            const bool correctable = r.status == RestrictionStatus::Valid && r.fidelity &&
                                     *r.fidelity >= 1.0 - t && r.leakage <= t;
            static const char* names[] = {"valid", "leaky", "invalid-restriction"};
            report.tolerances = {{"exact", t}, {"leakage_limit", kLeakageLimit}};
            report.results = {{"fidelity", r.fidelity ? Json(*r.fidelity) : Json(nullptr)},
                              {"leakage", r.leakage},
                              {"correctable", correctable},
                              {"status", names[static_cast<int>(r.status)]}};
        };
    });

    auto* rc = app.add_subcommand("random-channel", "seeded Haar-random channel as a Kraus document");
    rc->add_option("--din", din)->required()->check(CLI::PositiveNumber);
    rc->add_option("--dout", dout)->required()->check(CLI::PositiveNumber);
    rc->add_option("--rank", rank)->required()->check(CLI::PositiveNumber);
    rc->add_option("--seed", seed)->required();
    rc->callback([&] {
        run = [&] {
            report.inputs = Json::array();
            report.seed = seed;
            report.results = {{"document", io::kraus_document(random_channel(din, dout, rank, seed))},
                              {"rank", rank}};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }
    report.command = app.get_subcommands().front()->get_name();

    int code = kExitOk;
    try {
        run();
    } catch (const Failure& f) {
        std::cerr << report.command << ": " << f.what << "\n";
        code = kExitFailed;
    } catch (const CertificateError& e) {
        std::cerr << report.command << ": certificate failed (gap " << e.gap() << "): " << e.what() << "\n";
        return kExitFailed;
    } catch (const std::invalid_argument& e) {
        std::cerr << report.command << ": invalid input: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << report.command << ": " << e.what() << "\n";
        return kExitFailed;
    }
    std::cout << report.serialize();
    return code;
}
