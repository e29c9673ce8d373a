// Batch front-end: ingest algebra definitions, run the orbit/representation/
// microlocal pipelines, and emit plot-ready tables plus a manifest carrying
// every threshold and measured constant a verdict depends on.

#include "nilorbit/fixtures.hpp"
#include "nilorbit/io.hpp"
#include "nilorbit/microlocal.hpp"
#include "nilorbit/util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

using namespace nilorbit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Config {
    std::string algebra_path;
    std::vector<std::string> l_strings;
    std::string eta_string;
    double window_radius = 1.0;
    std::string scales = "16:1024:7";
    int directions = 180;
    int order_n = 4;
    std::string out_dir = "out";
    uint64_t seed = 1;
    int grid_count = 5;
    double grid_extent = 2.0;
};

std::vector<double> parse_scales(const std::string& text) {
    double t0 = 16, t1 = 1024;
    int count = 7;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &t0, &t1, &count) != 3)
        throw ParseError("bad --scales \"" + text + "\"; expected t0:t1:count");
    if (t0 <= 0 || t1 < t0 || count < 1)
        throw ParseError("bad --scales range \"" + text + "\"");
    return dyadic_scales(t0, t1, count);
}

json base_manifest(const std::string& command, const Config& cfg) {
    json m;
    m["command"] = command;
    m["config"]["algebra"] = cfg.algebra_path;
    m["config"]["l"] = cfg.l_strings;
    m["config"]["window_radius"] = cfg.window_radius;
    m["config"]["scales"] = cfg.scales;
    m["config"]["directions"] = cfg.directions;
    m["config"]["N"] = cfg.order_n;
    m["config"]["seed"] = cfg.seed;
    DecayOptions d;
    m["thresholds"]["quad_rel_tol"] = d.quad.rel_tol;
    m["thresholds"]["quad_order_cap"] = d.quad.max_order;
    m["thresholds"]["censor_floor"] = d.censor_floor;
    m["thresholds"]["r2_gate"] = d.r2_gate;
    m["thresholds"]["aperture"] = d.aperture;
    m["thresholds"]["eps_ball"] = d.eps_ball;
    m["thresholds"]["min_scales"] = d.min_scales;
    m["thresholds"]["nondecay_slope"] = 2.0;
    return m;
}

void write_manifest(const json& m, const std::string& out) {
    fs::create_directories(out);
    std::ofstream f(fs::path(out) / "manifest.json");
    f << m.dump(2) << "\n";
}

AlgebraPtr load(const Config& cfg) {
    if (cfg.algebra_path.empty()) throw ParseError("--algebra is required");
    return load_algebra(cfg.algebra_path);
}

Functional functional_from(const AlgebraPtr& g, const std::string& text) {
    return {g, parse_covector(text, g->dim())};
}

std::string coords_str(const RatVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + rat_str(v[i]);
    return s + ")";
}

std::string vec_str(const Eigen::VectorXd& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + TableWriter::num(v[i]);
    return s + ")";
}

std::vector<Eigen::VectorXd> direction_grid(int n, int count) {
    std::vector<Eigen::VectorXd> dirs;
    if (n == 3) {
        for (auto& d : fibonacci_sphere(count)) dirs.push_back(to_eigen(d));
        return dirs;
    }
    for (int i = 0; (int)dirs.size() < count && i < count * 20; ++i) {
        auto h = halton_point((uint64_t)i, n);
        Eigen::VectorXd v(n);
        for (int d = 0; d < n; ++d) v[d] = 2 * h[(size_t)d] - 1;
        double nn = v.norm();
        if (nn > 1e-6) dirs.push_back(v / nn);
    }
    return dirs;
}

int cmd_algebra_check(const Config& cfg) {
    auto g = load(cfg);
    auto rep = validate(*g);
    TableWriter table({"property", "value"});
    table.add_row({"name", g->name()});
    table.add_row({"dim", TableWriter::integer(g->dim())});
    table.add_row({"antisymmetry", rep.antisymmetry_ok ? "ok" : "FAIL"});
    table.add_row({"jacobi", rep.jacobi_ok ? "ok" : "FAIL"});
    table.add_row({"nilpotent", rep.nilpotent_ok ? "ok" : "FAIL"});
    table.add_row({"gram_positive", rep.gram_ok ? "ok" : "FAIL"});
    table.add_row({"class", TableWriter::integer(rep.nilpotency_class)});
    for (const auto& f : rep.failures) table.add_row({"failure", f});

    if (rep.valid()) {
        auto series = lower_central_series(*g);
        for (size_t s = 0; s < series.size(); ++s)
            table.add_row({"series_dim_" + std::to_string(s + 1),
                           TableWriter::integer((long)series[s].size())});
        auto z = center(*g);
        std::string zdesc = "span{";
        for (size_t i = 0; i < z.size(); ++i)
            zdesc += (i ? ", " : "") + coords_str(z[i]);
        table.add_row({"center", z.empty() ? "0" : zdesc + "}"});
        try {
            auto kd = kirillov_decomposition(g);
            table.add_row({"kirillov_Z", coords_str(kd.Z.coords)});
            table.add_row({"kirillov_Y", coords_str(kd.Y.coords)});
            table.add_row({"kirillov_X", coords_str(kd.X.coords)});
            table.add_row({"kirillov_X_unit_exact", kd.x_unit_exact ? "yes" : "no"});
        } catch (const StructuralError& e) {
            table.add_row({"kirillov", e.what()});
        }

        std::mt19937_64 rng(cfg.seed);
        bool assoc_ok = true;
        for (int i = 0; i < 25 && g->nilpotency_class() <= kMaxBchOrder; ++i) {
            AlgebraElement a{g, fixtures::random_rat_vec(rng(), g->dim())};
            AlgebraElement b{g, fixtures::random_rat_vec(rng(), g->dim())};
            AlgebraElement c{g, fixtures::random_rat_vec(rng(), g->dim())};
            auto left = bch_multiply(bch_multiply(a, b), c);
            auto right = bch_multiply(a, bch_multiply(b, c));
            assoc_ok = assoc_ok && left.coords == right.coords;
        }
        table.add_row({"bch_associativity_spot", assoc_ok ? "ok" : "FAIL"});
    }

    fs::create_directories(cfg.out_dir);
    table.write(fs::path(cfg.out_dir) / "algebra_check.txt");
    std::cout << table.str();
    auto manifest = base_manifest("algebra check", cfg);
    manifest["result"]["valid"] = rep.valid();
    manifest["result"]["class"] = rep.nilpotency_class;
    write_manifest(manifest, cfg.out_dir);
    return rep.valid() ? 0 : 2;
}

int cmd_orbit(const Config& cfg) {
    auto g = load(cfg);
    if (cfg.l_strings.empty()) throw ParseError("--l is required for orbit");
    auto l = functional_from(g, cfg.l_strings.front());
    auto rad = radical(l);
    auto chart = OrbitChart::build(l);
    DualMetric metric(*g);

    TableWriter info({"property", "value"});
    info.add_row({"radical_dim", TableWriter::integer((long)rad.size())});
    info.add_row({"orbit_dim", TableWriter::integer(orbit_dimension(l))});
    info.add_row({"affine_chart", chart.is_affine() ? "yes" : "no"});
    fs::create_directories(cfg.out_dir);
    info.write(fs::path(cfg.out_dir) / "orbit_info.txt");
    std::cout << info.str();

    std::vector<std::string> cols;
    const int d = chart.param_dim();
    for (int j = 0; j < d; ++j) cols.push_back("t" + std::to_string(j + 1));
    for (int i = 0; i < g->dim(); ++i) cols.push_back("xi" + std::to_string(i + 1));
    cols.push_back("norm");
    TableWriter samples(cols);

    std::vector<RatVec> grid;
    if (d == 0) {
        grid.push_back({});
    } else {
        std::vector<int> idx((size_t)d, 0);
        while (true) {
            RatVec t((size_t)d);
            for (int j = 0; j < d; ++j)
                t[(size_t)j] = Rat((long)std::llround(
                                       (2.0 * idx[(size_t)j] / (cfg.grid_count - 1) - 1) *
                                       cfg.grid_extent * 100),
                                   100);
            grid.push_back(t);
            int j = 0;
            while (j < d && ++idx[(size_t)j] == cfg.grid_count) idx[(size_t)j++] = 0;
            if (j == d) break;
        }
    }
    auto points = orbit_sample(chart, grid);
    for (size_t gi = 0; gi < grid.size(); ++gi) {
        std::vector<std::string> row;
        for (int j = 0; j < d; ++j) row.push_back(rat_str(grid[gi][(size_t)j]));
        for (int i = 0; i < g->dim(); ++i)
            row.push_back(rat_str(points[gi].covector[(size_t)i]));
        row.push_back(TableWriter::num(metric.norm(to_eigen(points[gi].covector))));
        samples.add_row(row);
    }
    samples.write(fs::path(cfg.out_dir) / "orbit_samples.txt");

    TableWriter dist({"eta", "distance", "exact"});
    std::vector<Eigen::VectorXd> probes;
    if (!cfg.eta_string.empty()) {
        probes.push_back(to_eigen(parse_covector(cfg.eta_string, g->dim())));
    } else {
        probes.push_back(to_eigen(l.covector));
        probes.push_back(2.0 * to_eigen(l.covector));
        Eigen::VectorXd e1 = Eigen::VectorXd::Zero(g->dim());
        e1[0] = 1.0;
        probes.push_back(to_eigen(l.covector) + e1);
    }
    for (const auto& eta : probes) {
        auto res = distance_to_orbit(eta, chart, 8.0);
        dist.add_row({vec_str(eta), TableWriter::num(res.value),
                      res.exact ? "yes" : "no"});
    }
    dist.write(fs::path(cfg.out_dir) / "orbit_distances.txt");

    auto manifest = base_manifest("orbit", cfg);
    manifest["result"]["orbit_dim"] = orbit_dimension(l);
    manifest["result"]["affine"] = chart.is_affine();
    write_manifest(manifest, cfg.out_dir);
    return 0;
}

int cmd_polarize(const Config& cfg) {
    auto g = load(cfg);
    if (cfg.l_strings.empty()) throw ParseError("--l is required for polarize");
    auto l = functional_from(g, cfg.l_strings.front());
    auto pol = vergne_polarization(l);
    auto check = is_polarizing(pol.m_basis, l);

    std::vector<std::string> cols;
    for (int i = 0; i < g->dim(); ++i) cols.push_back("c" + std::to_string(i + 1));
    TableWriter table(cols);
    for (const auto& row : pol.m_basis) {
        std::vector<std::string> cells;
        for (const auto& x : row) cells.push_back(rat_str(x));
        table.add_row(cells);
    }
    fs::create_directories(cfg.out_dir);
    table.write(fs::path(cfg.out_dir) / "polarization.txt");
    std::cout << table.str();

    auto manifest = base_manifest("polarize", cfg);
    manifest["result"]["dim_m"] = pol.m_basis.size();
    manifest["result"]["verified"] = check.ok();
    write_manifest(manifest, cfg.out_dir);
    return check.ok() ? 0 : 2;
}

std::string poly_str(const Poly<double>& p, int nvars) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : p.terms()) {
        os << (first ? "" : " + ") << c;
        first = false;
        for (int v = 0; v < nvars; ++v)
            for (int rr = 0; rr < mono_exp(key, v); ++rr) os << "*s" << v + 1;
    }
    return first ? "0" : os.str();
}

int cmd_rep_realize(const Config& cfg) {
    auto g = load(cfg);
    if (cfg.l_strings.empty()) throw ParseError("--l is required for rep realize");
    auto l = functional_from(g, cfg.l_strings.front());
    auto rep = InducedRep::realize(l, vergne_polarization(l));

    TableWriter table({"generator", "new_coordinates", "phase_polynomial"});
    for (int i = 0; i < g->dim(); ++i) {
        std::vector<double> e((size_t)g->dim(), 0.0);
        e[(size_t)i] = 1.0;
        auto act = rep->symbolic_action(e);
        std::ostringstream snew;
        for (int j = 0; j < rep->k(); ++j) {
            if (j) snew << "; ";
            snew << "s" << j + 1 << "' = " << poly_str(act.s_new[(size_t)j], rep->k());
        }
        table.add_row({"e" + std::to_string(i + 1),
                       rep->k() ? snew.str() : "(scalar)",
                       poly_str(act.phase, rep->k())});
    }
    fs::create_directories(cfg.out_dir);
    table.write(fs::path(cfg.out_dir) / "rep_action.txt");
    std::cout << table.str();

    std::mt19937_64 rng(cfg.seed);
    auto f = to_grid(GaussianVector::unit(rep->k()), 6.0, 6.0 / 128);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        auto glog = to_double(fixtures::random_rat_vec(rng(), g->dim()));
        auto moved = rep->apply(glog, RepVector{f}, f.box, f.step);
        worst = std::max(
            worst,
            std::abs(rep_norm(RepVector{moved}) / rep_norm(RepVector{f}) - 1.0));
    }
    std::cout << "unitarity deviation (5 seeded group elements): "
              << TableWriter::num(worst) << "\n";

    auto manifest = base_manifest("rep realize", cfg);
    manifest["result"]["cross_section_dim"] = rep->k();
    manifest["result"]["unitarity_deviation"] = worst;
    write_manifest(manifest, cfg.out_dir);
    return worst < 1e-6 ? 0 : 2;
}

int cmd_verify_lower(const Config& cfg) {
    auto g = load(cfg);
    if (cfg.l_strings.empty()) throw ParseError("--l is required for verify lower");
    auto zeta = functional_from(g, cfg.l_strings.front());
    auto lbv = construct_lower_bound_vectors(zeta);
    double c2 = measure_chart_c2(g);
    auto consts = lower_bound_constants(*lbv, c2);
    DualMetric metric(*g);
    double zn = metric.norm(to_eigen(zeta.covector));
    double radius = consts.eps / std::sqrt(japanese_bracket(zn));
    auto phi = make_window(*g, radius, 4);

    std::vector<Eigen::VectorXd> etas{to_eigen(zeta.covector)};
    if (!cfg.eta_string.empty())
        etas.push_back(to_eigen(parse_covector(cfg.eta_string, g->dim())));
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    while (etas.size() < 6) {
        Eigen::VectorXd p(g->dim());
        for (int i = 0; i < g->dim(); ++i) p[i] = unit(rng);
        if (p.norm() < 1e-9) continue;
        p *= 0.5 * consts.delta / consts.eps / metric.norm(p);
        etas.push_back(to_eigen(zeta.covector) + p);
    }

    TableWriter table({"eta", "admissible", "re_value", "threshold", "margin", "pass"});
    bool all_pass = true;
    for (const auto& eta : etas) {
        auto v = verify_lower_bound(lbv, eta, phi, c2);
        table.add_row({vec_str(eta), v.admissible ? "yes" : ("no: " + v.rejection),
                       TableWriter::num(v.re_value), TableWriter::num(v.threshold),
                       TableWriter::num(v.margin), v.pass ? "yes" : "no"});
        all_pass = all_pass && (!v.admissible || v.pass);
    }
    fs::create_directories(cfg.out_dir);
    table.write(fs::path(cfg.out_dir) / "lower_bound.txt");
    std::cout << table.str();

    auto manifest = base_manifest("verify lower", cfg);
    manifest["measured"]["c_tilde"] = consts.c_tilde;
    manifest["measured"]["c_n2"] = consts.c_n2;
    manifest["measured"]["eps"] = consts.eps;
    manifest["measured"]["delta"] = consts.delta;
    manifest["measured"]["window_radius"] = radius;
    manifest["measured"]["mollifier_width"] = lbv->mollifier_width;
    manifest["measured"]["certified_sup_gap"] = lbv->certified_sup_gap;
    manifest["measured"]["v_norm"] = lbv->v_norm;
    write_manifest(manifest, cfg.out_dir);
    return all_pass ? 0 : 2;
}

int cmd_verify_decay(const Config& cfg) {
    auto g = load(cfg);
    if (cfg.l_strings.empty()) throw ParseError("--l is required for verify decay");
    auto l = functional_from(g, cfg.l_strings.front());
    if (cfg.eta_string.empty()) throw ParseError("--eta is required for verify decay");
    Eigen::VectorXd eta = to_eigen(parse_covector(cfg.eta_string, g->dim()));
    auto chart = OrbitChart::build(l);
    auto phi = make_window(*g, cfg.window_radius, 4);
    auto scales = parse_scales(cfg.scales);

    auto repd = verify_decay_bound(l, eta, chart, phi, cfg.order_n, scales);
    TableWriter table({"scale", "magnitude", "gauss", "witness", "censored"});
    for (size_t i = 0; i < scales.size(); ++i)
        table.add_row({TableWriter::num(scales[i]),
                       TableWriter::num(repd.magnitudes[i]),
                       TableWriter::num(repd.gauss_stream[i]),
                       TableWriter::num(repd.witness_stream[i]),
                       repd.censored[i] ? "yes" : "no"});
    fs::create_directories(cfg.out_dir);
    table.write(fs::path(cfg.out_dir) / "decay.txt");
    std::cout << table.str();
    const char* names[] = {"rapid", "non-decay", "inconclusive"};
    std::cout << "classification: " << names[(int)repd.classification]
              << "  slope: " << TableWriter::num(repd.fitted_slope)
              << "  r2: " << TableWriter::num(repd.r2)
              << "  pass: " << (repd.pass ? "yes" : "no") << "\n";

    auto manifest = base_manifest("verify decay", cfg);
    manifest["result"]["classification"] = names[(int)repd.classification];
    manifest["result"]["fitted_slope"] = repd.fitted_slope;
    manifest["result"]["r2"] = repd.r2;
    manifest["result"]["pass"] = repd.pass;
    manifest["result"]["distance_exact"] = repd.distance_exact;
    manifest["measured"]["chart_c2"] = measure_chart_c2(g);
    manifest["thresholds"]["rapid_slope"] = g->dim() + 1;
    write_manifest(manifest, cfg.out_dir);
    return repd.pass ? 0 : 2;
}

std::vector<RepSummand> summands_from(const AlgebraPtr& g, const Config& cfg) {
    if (cfg.l_strings.empty()) throw ParseError("at least one --l is required");
    std::vector<RepSummand> reps;
    for (const auto& s : cfg.l_strings) reps.push_back({functional_from(g, s), 1});
    return reps;
}

int cmd_wf_scan(const Config& cfg) {
    auto g = load(cfg);
    auto reps = summands_from(g, cfg);
    auto phi = make_window(*g, cfg.window_radius, 4);
    auto scales = parse_scales(cfg.scales);
    auto grid = direction_grid(g->dim(), cfg.directions);
    auto scan = wf_cone_estimate(reps, grid, phi, cfg.order_n, scales);

    std::vector<std::string> cols;
    for (int i = 0; i < g->dim(); ++i) cols.push_back("d" + std::to_string(i + 1));
    cols.push_back("class");
    cols.push_back("slope");
    cols.push_back("in_estimate");
    TableWriter table(cols);
    const char* names[] = {"rapid", "non-decay", "inconclusive"};
    int in_count = 0, inconcl = 0;
    for (const auto& res : scan.directions) {
        std::vector<std::string> row;
        for (int i = 0; i < g->dim(); ++i)
            row.push_back(TableWriter::num(res.direction[i]));
        row.push_back(names[(int)res.cls]);
        row.push_back(TableWriter::num(res.worst_slope));
        row.push_back(res.inconclusive ? "inconclusive"
                                       : (res.in_wf_estimate ? "yes" : "no"));
        table.add_row(row);
        in_count += res.in_wf_estimate ? 1 : 0;
        inconcl += res.inconclusive ? 1 : 0;
    }
    fs::create_directories(cfg.out_dir);
    table.write(fs::path(cfg.out_dir) / "wf_scan.txt");
    std::cout << "directions in estimate: " << in_count << "/" << grid.size()
              << " (inconclusive " << inconcl << "); zero is always included\n";

    auto manifest = base_manifest("wf scan", cfg);
    manifest["result"]["in_estimate"] = in_count;
    manifest["result"]["inconclusive"] = inconcl;
    manifest["result"]["grid"] = (int)grid.size();
    manifest["thresholds"]["rapid_slope"] = g->dim() + 1;
    write_manifest(manifest, cfg.out_dir);
    return 0;
}

int cmd_compare(const Config& cfg) {
    auto g = load(cfg);
    auto reps = summands_from(g, cfg);
    auto phi = make_window(*g, cfg.window_radius, 4);
    auto scales = parse_scales(cfg.scales);
    auto grid = direction_grid(g->dim(), cfg.directions);
    std::vector<std::shared_ptr<OrbitChart>> charts;
    for (const auto& r : reps)
        charts.push_back(std::make_shared<OrbitChart>(OrbitChart::build(r.l)));

    auto cmp = compare_wf_ac(reps, charts, grid, phi, cfg.order_n, scales, scales);

    std::vector<std::string> cols;
    for (int i = 0; i < g->dim(); ++i) cols.push_back("d" + std::to_string(i + 1));
    cols.push_back("wf");
    cols.push_back("ac");
    cols.push_back("status");
    TableWriter table(cols);
    for (const auto& res : cmp.directions) {
        std::vector<std::string> row;
        for (int i = 0; i < g->dim(); ++i)
            row.push_back(TableWriter::num(res.direction[i]));
        row.push_back(res.inconclusive ? "inconclusive"
                                       : (res.in_wf_estimate ? "in" : "out"));
        row.push_back(res.ac == AcVerdict::In
                          ? "in"
                          : (res.ac == AcVerdict::Out ? "out" : "inconclusive"));
        bool concl = !res.inconclusive && res.ac != AcVerdict::Inconclusive;
        row.push_back(!concl ? "skipped"
                             : ((res.ac == AcVerdict::In) == res.in_wf_estimate
                                    ? "agree"
                                    : "disagree"));
        table.add_row(row);
    }
    fs::create_directories(cfg.out_dir);
    table.write(fs::path(cfg.out_dir) / "compare.txt");
    std::cout << "agreement " << cmp.agree << "/" << cmp.agree + cmp.disagree
              << " (rate " << TableWriter::num(cmp.agreement_rate)
              << ", inconclusive " << cmp.inconclusive << ")\n";
    for (int idx : cmp.disagreement_indices) {
        const auto& res = cmp.directions[(size_t)idx];
        std::cout << "disagreement at " << vec_str(res.direction)
                  << " wf=" << (res.in_wf_estimate ? "in" : "out")
                  << " ac=" << (res.ac == AcVerdict::In ? "in" : "out")
                  << " slope=" << TableWriter::num(res.worst_slope) << "\n";
    }

    auto manifest = base_manifest("compare", cfg);
    manifest["result"]["agree"] = cmp.agree;
    manifest["result"]["disagree"] = cmp.disagree;
    manifest["result"]["inconclusive"] = cmp.inconclusive;
    manifest["result"]["agreement_rate"] = cmp.agreement_rate;
    manifest["thresholds"]["rapid_slope"] = g->dim() + 1;
    manifest["measured"]["chart_c2"] = measure_chart_c2(g);
    write_manifest(manifest, cfg.out_dir);
    return 0;
}

int cmd_report(const Config& cfg) {
    json combined = json::array();
    fs::path dir(cfg.out_dir);
    if (!fs::exists(dir))
        throw ParseError("output directory does not exist: " + cfg.out_dir);
    std::vector<fs::path> manifests;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename() == "manifest.json")
            manifests.push_back(entry.path());
    std::sort(manifests.begin(), manifests.end());
    for (const auto& p : manifests) {
        std::ifstream f(p);
        json m;
        f >> m;
        m["path"] = p.string();
        combined.push_back(m);
    }
    std::ofstream out(dir / "report.json");
    out << combined.dump(2) << "\n";
    std::cout << "aggregated " << combined.size() << " manifest(s) into "
              << (dir / "report.json").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coadjoint orbit and wave-front analysis for nilpotent Lie groups"};
    app.require_subcommand(1);
    Config cfg;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--algebra", cfg.algebra_path, "algebra definition file");
        cmd->add_option("--l", cfg.l_strings,
                        "functional coordinates a1,a2,... (repeatable)");
        cmd->add_option("--eta", cfg.eta_string, "covector coordinates a1,a2,...");
        cmd->add_option("--window-radius", cfg.window_radius, "window support radius");
        cmd->add_option("--scales", cfg.scales, "dyadic scales t0:t1:count");
        cmd->add_option("--directions", cfg.directions, "direction grid size");
        cmd->add_option("--N", cfg.order_n, "decay order / threshold");
        cmd->add_option("--out", cfg.out_dir, "output directory");
        cmd->add_option("--seed", cfg.seed, "seed for randomized spot checks");
    };

    auto* algebra = app.add_subcommand("algebra", "algebra-level operations");
    auto* algebra_check = algebra->add_subcommand("check", "validate and decompose");
    add_common(algebra_check);
    auto* orbit = app.add_subcommand("orbit", "radical, dimension, samples, distances");
    add_common(orbit);
    auto* polarize = app.add_subcommand("polarize", "vergne polarization");
    add_common(polarize);
    auto* rep = app.add_subcommand("rep", "representation-level operations");
    auto* rep_realize = rep->add_subcommand("realize", "action formulas + unitarity");
    add_common(rep_realize);
    auto* verify = app.add_subcommand("verify", "microlocal estimates");
    auto* verify_lower = verify->add_subcommand("lower", "orbit-side lower bound");
    add_common(verify_lower);
    auto* verify_decay = verify->add_subcommand("decay", "far-from-orbit decay");
    add_common(verify_decay);
    auto* wf = app.add_subcommand("wf", "wave-front scans");
    auto* wf_scan = wf->add_subcommand("scan", "direction classification scan");
    add_common(wf_scan);
    auto* compare = app.add_subcommand("compare", "wave front vs asymptotic cone");
    add_common(compare);
    auto* report = app.add_subcommand("report", "aggregate manifests in --out");
    add_common(report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (algebra_check->parsed()) return cmd_algebra_check(cfg);
        if (orbit->parsed()) return cmd_orbit(cfg);
        if (polarize->parsed()) return cmd_polarize(cfg);
        if (rep_realize->parsed()) return cmd_rep_realize(cfg);
        if (verify_lower->parsed()) return cmd_verify_lower(cfg);
        if (verify_decay->parsed()) return cmd_verify_decay(cfg);
        if (wf_scan->parsed()) return cmd_wf_scan(cfg);
        if (compare->parsed()) return cmd_compare(cfg);
        if (report->parsed()) return cmd_report(cfg);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CertificationError& e) {
        std::cerr << "certification error: " << e.what() << "\n";
        return 4;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what() << "\n";
        return 3;
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
