#include <iostream>

#include <CLI11.hpp>

#include "fqdyn/acceptance.hpp"
#include "fqdyn/io.hpp"
#include "fqdyn/sweep.hpp"

using namespace fqdyn;

namespace {

struct CommonArgs {
    std::string field, map, alpha = "0", f, g, mobius;
    int alpha_ext = 1;
    int n = 0, nmax = 6, depth = 2;
    uint64_t seed = 0;
    bool csv = false, dot = false;
    Caps caps;
};

void add_field_opts(CLI::App* cmd, CommonArgs& a, bool need_map = true) {
    cmd->add_option("--field", a.field, "field spec: p | p^m | p^m:mod=<poly>")->required();
    if (need_map) cmd->add_option("--map", a.map, "rational map: (g)/(h)")->required();
    cmd->add_option("--seed", a.seed, "seed for modulus search and factorization");
    cmd->add_option("--degree-cap", a.caps.degree_cap, "max degree for iterates and transforms");
    cmd->add_option("--orbit-cap", a.caps.orbit_log2_cap, "log2 of the max field size for orbit walks");
    cmd->add_option("--star-max-d", a.caps.star_max_d, "max map degree for tree enumeration");
    cmd->add_option("--star-max-n", a.caps.star_max_n, "max depth for tree enumeration");
    cmd->add_flag("--csv", a.csv, "CSV output instead of JSON");
}

void add_alpha_opts(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--alpha", a.alpha, "point, as an element literal (t is the extension generator)");
    cmd->add_option("--alpha-ext", a.alpha_ext, "extension degree the point lives in");
}

struct Parsed {
    FieldPtr base;
    RatMap map;
    FElem alpha;
};

Parsed parse_common(const CommonArgs& a, bool need_map = true) {
    Parsed p;
    p.base = parse_field_spec(a.field, a.seed);
    if (need_map) p.map = parse_map(a.map, p.base);
    auto actx = a.alpha_ext == 1 ? p.base : extension(p.base, a.alpha_ext, a.seed);
    p.alpha = parse_element(a.alpha, actx);
    return p;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact preimage growth of rational maps over finite fields"};
    app.require_subcommand(1);

    CommonArgs a;
    std::string config_path, out_path = "sweep.csv";
    double selftest_scale = 0.15;

    auto* c_classify = app.add_subcommand("classify", "criticality classification of (alpha, R)");
    add_field_opts(c_classify, a);
    add_alpha_opts(c_classify, a);

    auto* c_constant = app.add_subcommand("constant", "exact growth constant c");
    add_field_opts(c_constant, a);
    add_alpha_opts(c_constant, a);

    auto* c_delta = app.add_subcommand("delta", "number of distinct n-th preimages");
    add_field_opts(c_delta, a);
    add_alpha_opts(c_delta, a);
    auto* c_delta_n = c_delta->add_option("--n", a.n, "level");
    c_delta->add_flag("--dot", a.dot, "emit the preimage tree in DOT form");
    c_delta->add_option("--depth", a.depth, "tree depth for --dot");

    auto* c_predict = app.add_subcommand("delta-predict", "c*d^n with an exactness flag");
    add_field_opts(c_predict, a);
    add_alpha_opts(c_predict, a);
    c_predict->add_option("--n", a.n, "level")->required();

    auto* c_orbit = app.add_subcommand("orbit", "forward orbit with tail and cycle data");
    add_field_opts(c_orbit, a);
    add_alpha_opts(c_orbit, a);

    auto* c_def = app.add_subcommand("deficiency", "the deficient values and their weights");
    add_field_opts(c_def, a);

    auto* c_ntable = app.add_subcommand("ntable", "depth-indexed deficiency weights");
    add_field_opts(c_ntable, a);
    add_alpha_opts(c_ntable, a);

    auto* c_stats = app.add_subcommand("stats", "factorization statistics of the n-th transform");
    add_field_opts(c_stats, a);
    c_stats->add_option("--f", a.f, "admissible polynomial")->required();
    c_stats->add_option("--n", a.n, "level")->required();

    auto* c_growth = app.add_subcommand("growth", "statistics for n <= nmax with model fits");
    add_field_opts(c_growth, a);
    c_growth->add_option("--f", a.f, "admissible polynomial")->required();
    c_growth->add_option("--nmax", a.nmax, "largest level");

    auto* c_conj = app.add_subcommand("conjugate", "conjugation invariance of the statistics");
    add_field_opts(c_conj, a, /*need_map=*/false);
    c_conj->add_option("--f", a.f, "admissible polynomial")->required();
    c_conj->add_option("--g", a.g, "polynomial to conjugate")->required();
    c_conj->add_option("--mobius", a.mobius, "matrix [[a,b],[c,d]]")->required();
    c_conj->add_option("--nmax", a.nmax, "largest level");

    auto* c_rev = app.add_subcommand("reversed-orbit", "finiteness and enumeration of the reversed orbit");
    add_field_opts(c_rev, a);
    add_alpha_opts(c_rev, a);

    auto* c_selftest = app.add_subcommand("selftest", "acceptance property suites at reduced scale");
    c_selftest->add_option("--scale", selftest_scale, "sample-count scale factor");

    auto* c_sweep = app.add_subcommand("sweep", "cartesian sweep driven by a config file");
    c_sweep->add_option("--config", config_path, "key=value config file")->required();
    c_sweep->add_option("--out", out_path, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_classify->parsed()) {
            auto p = parse_common(a);
            CritReport rep = classify(p.map, p.alpha, a.caps);
            if (a.csv)
                std::cout << crit_report_csv(rep) << "\n";
            else
                emit(crit_report_json(rep));
            return rep.outside_scope ? 4 : 0;
        }
        if (c_constant->parsed()) {
            auto p = parse_common(a);
            Rat c = growth_constant(p.map, p.alpha, a.caps);
            if (a.csv)
                std::cout << "c_num,c_den\n"
                          << boost::multiprecision::numerator(c) << "," << boost::multiprecision::denominator(c)
                          << "\n";
            else
                emit(Json{{"alpha", format_element(p.alpha)}, {"c", rat_json(c)}});
            return 0;
        }
        if (c_delta->parsed()) {
            auto p = parse_common(a);
            if (a.dot) {
                std::cout << preimage_tree_dot(p.map, p.alpha, a.depth, a.caps);
                return 0;
            }
            if (c_delta_n->count() == 0) raise(Errc::ParseError, "delta needs --n (or --dot)");
            int d = delta_oracle(p.map, p.alpha, a.n, a.caps);
            if (a.csv)
                std::cout << "n,delta\n" << a.n << "," << d << "\n";
            else
                emit(Json{{"alpha", format_element(p.alpha)}, {"n", a.n}, {"delta", d}});
            return 0;
        }
        if (c_predict->parsed()) {
            auto p = parse_common(a);
            Prediction pr = predicted_count(p.map, p.alpha, a.n, a.caps);
            emit(Json{{"alpha", format_element(p.alpha)},
                      {"n", a.n},
                      {"estimate", rat_json(pr.estimate)},
                      {"guaranteed_exact", pr.guaranteed_exact}});
            return 0;
        }
        if (c_orbit->parsed()) {
            auto p = parse_common(a);
            emit(orbit_json(forward_orbit(p.map, p.alpha, a.caps)));
            return 0;
        }
        if (c_def->parsed()) {
            auto p = parse_common(a);
            emit(deficiency_json(deficiency_table(p.map)));
            return 0;
        }
        if (c_ntable->parsed()) {
            auto p = parse_common(a);
            emit(depth_table_json(depth_table(p.map, p.alpha, a.caps)));
            return 0;
        }
        if (c_stats->parsed()) {
            auto p = parse_common(a);
            Poly f = parse_poly(a.f, p.base);
            StatRecord rec = stats_at(f, p.map, a.n, a.caps);
            if (a.csv)
                std::cout << stats_csv_header() << "\n" << stats_csv_row(rec) << "\n";
            else
                emit(stat_record_json(rec));
            return 0;
        }
        if (c_growth->parsed()) {
            auto p = parse_common(a);
            Poly f = parse_poly(a.f, p.base);
            GrowthReport rep = growth_report(f, p.map, a.nmax, a.caps);
            if (a.csv) {
                std::cout << stats_csv_header() << "\n";
                for (const auto& rec : rep.records) std::cout << stats_csv_row(rec) << "\n";
            } else {
                emit(growth_json(rep));
            }
            return 0;
        }
        if (c_conj->parsed()) {
            auto base = parse_field_spec(a.field, a.seed);
            Poly f = parse_poly(a.f, base);
            Poly g = parse_poly(a.g, base);
            Mobius A = parse_mobius(a.mobius, base);
            emit(conjugacy_json(conjugate_invariance(f, g, A, a.nmax, a.caps)));
            return 0;
        }
        if (c_rev->parsed()) {
            auto p = parse_common(a);
            emit(reversed_orbit_json(reversed_orbit(p.map, p.alpha, a.caps)));
            return 0;
        }
        if (c_selftest->parsed()) {
            auto results = run_acceptance(selftest_scale, std::cout);
            bool all = true, unexplained = false;
            for (const auto& r : results) {
                all = all && r.pass;
                if (!r.pass && !r.known_defect) unexplained = true;
            }
            if (all)
                std::cout << "selftest passed\n";
            else if (!unexplained)
                std::cout << "selftest passed (documented source defects reported above)\n";
            else
                std::cout << "selftest failed\n";
            return unexplained ? 1 : 0;
        }
        if (c_sweep->parsed()) {
            SweepConfig cfg = parse_sweep_config(config_path);
            SweepResult r = run_sweep(cfg, out_path);
            std::cout << "rows_written=" << r.rows_written << " rows_skipped=" << r.rows_skipped
                      << " rows_with_error=" << r.rows_failed << "\n";
            return 0;
        }
    } catch (const Error& err) {
        // partial report on stdout, diagnostics on stderr
        emit(Json{{"error", errc_name(err.code())}, {"what", err.what()}});
        switch (err.code()) {
            case Errc::ParseError: return 2;
            case Errc::DegreeOverflow:
            case Errc::OrbitCapExceeded: return 3;
            case Errc::OutsideScope: return 4;
            default: return 1;
        }
    }
    return 0;
}
