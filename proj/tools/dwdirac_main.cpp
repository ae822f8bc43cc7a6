// dwdirac: experiment driver for domain-wall Dirac spectra.
//
// Verbs:
//   spectrum     gap eigenvalues of one profile (Witten-pair grid solver or shooting)
//   reduce       reduced-matrix determinant roots checked against the direct solver
//   asymptotics  closed-form leading eigenvalues over a delta list
//   sweep        per-delta comparison table (both direct methods, reduction roots,
//                leading asymptotics, eigenfunction errors) written as CSV
//   fit          least-squares decay rate of (delta, error) samples
//   dump         figure data: profile, zero modes, near-zero pair
//
// Every verb reads a JSON config (--config). The result is printed to stdout as
// JSON (and written to <out>/<verb>.json when --out is given); bulk data goes to
// CSV files under --out. Exit codes: 0 ok, 2 bad config or parameters, 3 numerics.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <Eigen/Dense>

#include "dwdirac/errors.hpp"
#include "dwdirac/fit.hpp"
#include "dwdirac/grid.hpp"
#include "dwdirac/mass_profile.hpp"
#include "dwdirac/reduction.hpp"
#include "dwdirac/shooting.hpp"
#include "dwdirac/wall_modes.hpp"
#include "dwdirac/witten.hpp"

using nlohmann::json;

namespace {

using namespace dwdirac;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known)
            throw invalid_parameter("config: unknown key \"" + item.key() + "\" in " + where);
    }
}

json load_config(const std::string& path) {
    if (path.empty()) throw invalid_parameter("config: --config <file> is required");
    std::ifstream in(path);
    if (!in) throw invalid_parameter("config: cannot open " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw invalid_parameter(std::string("config: ") + e.what());
    }
    if (!cfg.is_object()) throw invalid_parameter("config: top level must be a JSON object");
    return cfg;
}

// ---- profile / grid / options from config ---------------------------------

struct ProfileSpec {
    MassProfile base; // single wall
    int n = 1;
    std::optional<double> delta;
    std::optional<std::vector<double>> centers;
    std::optional<Bump> bump;
};

WallKind parse_kind(const std::string& s) {
    if (s == "mollifier") return WallKind::mollifier;
    if (s == "tanh") return WallKind::tanh_wall;
    if (s == "sgn") return WallKind::sgn;
    if (s == "custom") return WallKind::custom;
    throw invalid_parameter("config: profile.kind must be mollifier, tanh, sgn, or custom");
}

ProfileSpec parse_profile_spec(const json& cfg) {
    if (!cfg.contains("profile")) throw invalid_parameter("config: missing \"profile\"");
    const json& p = cfg.at("profile");
    if (!p.is_object()) throw invalid_parameter("config: \"profile\" must be an object");
    check_keys(p, "profile",
               {"kind", "kappa_inf", "n", "delta", "centers", "bump", "samples_x",
                "samples_kappa", "core_half_width"});
    const double kinf = p.value("kappa_inf", 1.0);
    if (!(kinf > 0.0)) throw invalid_parameter("config: profile.kappa_inf must be positive");
    const WallKind kind = parse_kind(p.value("kind", std::string("mollifier")));

    ProfileSpec spec{make_single_wall(WallKind::mollifier, 1.0), 1, {}, {}, {}};
    if (kind == WallKind::custom) {
        if (!p.contains("samples_x") || !p.contains("samples_kappa"))
            throw invalid_parameter("config: custom profile needs samples_x and samples_kappa");
        spec.base = make_custom_wall(p.at("samples_x").get<std::vector<double>>(),
                                     p.at("samples_kappa").get<std::vector<double>>(), kinf,
                                     p.value("core_half_width", 1.0));
    } else {
        spec.base = make_single_wall(kind, kinf);
    }

    if (p.contains("centers")) {
        if (p.contains("n") || p.contains("delta"))
            throw invalid_parameter("config: give profile.centers or profile.n/delta, not both");
        spec.centers = p.at("centers").get<std::vector<double>>();
        spec.n = static_cast<int>(spec.centers->size());
    } else {
        spec.n = p.value("n", 1);
        if (spec.n < 1) throw invalid_parameter("config: profile.n must be >= 1");
        if (p.contains("delta")) {
            spec.delta = p.at("delta").get<double>();
            if (!(*spec.delta > 0.0))
                throw invalid_parameter("config: profile.delta must be positive");
        }
    }
    if (p.contains("bump")) {
        const json& b = p.at("bump");
        check_keys(b, "profile.bump", {"amplitude", "center", "width"});
        if (!b.contains("amplitude") || !b.contains("center") || !b.contains("width"))
            throw invalid_parameter("config: profile.bump needs amplitude, center, width");
        spec.bump = Bump{b.at("amplitude").get<double>(), b.at("center").get<double>(),
                         b.at("width").get<double>()};
    }
    return spec;
}

MassProfile glue_spec(const ProfileSpec& spec, double delta) {
    MassProfile out = spec.n > 1 ? glue_walls(spec.base, spec.n, delta) : spec.base;
    if (spec.bump) out = out.with_bump(spec.bump->amplitude, spec.bump->center, spec.bump->width);
    return out;
}

MassProfile build_profile(const ProfileSpec& spec) {
    if (spec.centers) {
        MassProfile out = glue_walls_at(spec.base, *spec.centers);
        if (spec.bump)
            out = out.with_bump(spec.bump->amplitude, spec.bump->center, spec.bump->width);
        return out;
    }
    if (spec.n > 1 && !spec.delta)
        throw invalid_parameter("config: profile.delta is required when n > 1");
    return glue_spec(spec, spec.delta.value_or(0.0));
}

double outermost(const MassProfile& profile) {
    double out = 0.0;
    for (const Wall& w : profile.walls()) out = std::max(out, std::abs(w.center));
    if (profile.bump())
        out = std::max(out, std::abs(profile.bump()->center) + profile.bump()->width);
    return out;
}

// Explicit {L, N} from the config, otherwise a box padded 16/kappa_inf past the
// outermost feature with spacing near 2e-3.
Grid grid_from_config(const json& cfg, const MassProfile& profile) {
    if (cfg.contains("grid")) {
        const json& g = cfg.at("grid");
        check_keys(g, "grid", {"L", "N"});
        if (!g.contains("L") || !g.contains("N"))
            throw invalid_parameter("config: grid needs both L and N");
        const double L = g.at("L").get<double>();
        const int N = g.at("N").get<int>();
        if (!(L > 0.0)) throw invalid_parameter("config: grid.L must be positive");
        if (N < 3 || N % 2 == 0) throw invalid_parameter("config: grid.N must be odd and >= 3");
        if (L <= outermost(profile))
            throw invalid_parameter("config: grid.L must exceed the outermost wall center");
        return {L, N};
    }
    const double L = outermost(profile) + 16.0 / profile.kappa_inf();
    const int half = static_cast<int>(std::llround(L / 2e-3));
    return {L, 2 * half + 1};
}

double window_from_config(const json& cfg, const MassProfile& profile) {
    const double w = cfg.value("window", 0.0);
    if (w < 0.0 || w >= profile.kappa_inf())
        throw invalid_window("config: window must lie in [0, kappa_inf), 0 for the default");
    return w;
}

ReductionOptions reduction_options_from_config(const json& cfg) {
    ReductionOptions opts;
    if (cfg.contains("reduction")) {
        const json& r = cfg.at("reduction");
        check_keys(r, "reduction", {"h", "pad"});
        opts.h = r.value("h", opts.h);
        opts.pad = r.value("pad", opts.pad);
        if (!(opts.h > 0.0) || !(opts.pad > 0.0))
            throw invalid_parameter("config: reduction.h and reduction.pad must be positive");
    }
    return opts;
}

// eig: eigenvalue bisection tolerance; resid: first-order residual failure level;
// root: det/Wronskian root tolerance. Absent keys keep the library defaults.
struct Tolerances {
    std::optional<double> eig, resid, root;

    void apply(SolverOptions& o) const {
        if (eig) o.tol = *eig;
        if (resid) o.resid_tol = *resid;
    }
    void apply(ShootingOptions& o) const {
        if (root) o.root_tol = *root;
    }
    void apply(ReductionOptions& o) const {
        if (root) o.root_tol = *root;
    }
};

Tolerances tolerances_from_config(const json& cfg) {
    Tolerances t;
    if (cfg.contains("tolerances")) {
        const json& j = cfg.at("tolerances");
        check_keys(j, "tolerances", {"eig", "resid", "root"});
        if (j.contains("eig")) t.eig = j.at("eig").get<double>();
        if (j.contains("resid")) t.resid = j.at("resid").get<double>();
        if (j.contains("root")) t.root = j.at("root").get<double>();
        for (const auto& v : {t.eig, t.resid, t.root})
            if (v && !(*v > 0.0)) throw invalid_parameter("config: tolerances must be positive");
    }
    return t;
}

// ---- CSV writers -----------------------------------------------------------

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw invalid_parameter("cannot write " + path.string());
    return out;
}

template <class SpinorAt>
void write_mode_csv(const std::filesystem::path& path, const Grid& grid, SpinorAt&& f) {
    std::ofstream out = open_csv(path);
    out << "# dwdirac mode v1\n";
    out << "x,re_alpha1,im_alpha1,re_alpha2,im_alpha2\n";
    for (int i = 0; i < grid.N; ++i) {
        const double x = grid.x(i);
        const Spinor2 v = f(x);
        out << fmt(x) << ',' << fmt(v.up.real()) << ',' << fmt(v.up.imag()) << ','
            << fmt(v.down.real()) << ',' << fmt(v.down.imag()) << '\n';
    }
}

void write_state_csv(const std::filesystem::path& path, const Grid& grid, const GapState& s) {
    std::ofstream out = open_csv(path);
    out << "# dwdirac mode v1\n";
    out << "x,re_alpha1,im_alpha1,re_alpha2,im_alpha2\n";
    for (int i = 0; i < grid.N; ++i)
        out << fmt(grid.x(i)) << ',' << fmt(s.up[i].real()) << ',' << fmt(s.up[i].imag()) << ','
            << fmt(s.down[i].real()) << ',' << fmt(s.down[i].imag()) << '\n';
}

std::string csv_escape(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

// ---- shared measurement helpers --------------------------------------------

// L2 distance between a normalized grid state and an analytic candidate, minimized
// over the free global phase.
template <class SpinorAt>
double state_distance(const GapState& state, const Grid& grid, SpinorAt&& candidate) {
    complexd ip{0.0, 0.0};
    double nn = 0.0;
    for (int i = 0; i < grid.N; ++i) {
        const Spinor2 v = candidate(grid.x(i));
        ip += std::conj(v.up) * state.up[i] + std::conj(v.down) * state.down[i];
        nn += std::norm(v.up) + std::norm(v.down);
    }
    const double h = grid.h();
    if (!(nn > 0.0)) return std::sqrt(2.0);
    const double overlap = std::min(1.0, std::abs(ip) * h / std::sqrt(nn * h));
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

// largest |psi| at the outermost interior nodes (the endpoints themselves are
// pinned to zero by the Dirichlet truncation)
double boundary_amplitude(const DiracSpectrum& spectrum) {
    double amp = 0.0;
    for (const GapState& s : spectrum.states) {
        const int last = spectrum.grid.N - 2;
        amp = std::max({amp, std::sqrt(std::norm(s.up[1]) + std::norm(s.down[1])),
                        std::sqrt(std::norm(s.up[last]) + std::norm(s.down[last]))});
    }
    return amp;
}

// ---- verbs ------------------------------------------------------------------

json run_spectrum(const json& cfg, const std::filesystem::path& out_dir) {
    check_keys(cfg, "config", {"profile", "grid", "window", "method", "eigenfunctions",
                               "tolerances"});
    const ProfileSpec spec = parse_profile_spec(cfg);
    const MassProfile profile = build_profile(spec);
    const double window = window_from_config(cfg, profile);
    const Tolerances tols = tolerances_from_config(cfg);
    const std::string method = cfg.value("method", std::string("witten"));

    json out;
    out["method"] = method;
    if (method == "shooting") {
        if (cfg.value("eigenfunctions", false))
            throw invalid_parameter("config: eigenfunctions need method \"witten\"");
        ShootingOptions opts;
        opts.window = window;
        tols.apply(opts);
        const ShootingResult res = shooting_oracle(profile, opts);
        out["L"] = outermost(profile) + opts.x_pad / profile.kappa_inf();
        out["N"] = nullptr;
        out["gap_eigenvalues"] = res.energies;
        out["residuals"] = json::array();
        out["boundary_amplitude"] = nullptr;
        out["window"] = res.window;
        out["warnings"] = res.warnings;
        return out;
    }
    if (method != "witten")
        throw invalid_parameter("config: method must be \"witten\" or \"shooting\"");

    const Grid grid = grid_from_config(cfg, profile);
    SolverOptions opts;
    opts.window = window;
    tols.apply(opts);
    const DiracSpectrum spectrum = dirac_spectrum_in_gap(profile, grid, opts);
    std::vector<double> energies, residuals;
    for (const GapState& s : spectrum.states) {
        energies.push_back(s.E);
        residuals.push_back(s.residual);
    }
    out["L"] = grid.L;
    out["N"] = grid.N;
    out["gap_eigenvalues"] = energies;
    out["residuals"] = residuals;
    out["boundary_amplitude"] = boundary_amplitude(spectrum);
    out["window"] = spectrum.window;
    out["warnings"] = spectrum.warnings;
    if (cfg.value("eigenfunctions", false)) {
        std::vector<std::string> files;
        for (std::size_t k = 0; k < spectrum.states.size(); ++k) {
            const auto path = out_dir / ("state_" + std::to_string(k) + ".csv");
            write_state_csv(path, grid, spectrum.states[k]);
            files.push_back(path.string());
        }
        out["eigenfunction_files"] = files;
    }
    return out;
}

json run_reduce(const json& cfg) {
    check_keys(cfg, "config", {"profile", "grid", "window", "reduction", "tolerances"});
    const ProfileSpec spec = parse_profile_spec(cfg);
    const MassProfile profile = build_profile(spec);
    if (profile.walls().size() < 2 || !profile.half_spacing())
        throw invalid_parameter("reduce: profile must be n >= 2 uniformly spaced walls");
    const int n = static_cast<int>(profile.walls().size());
    const double delta = *profile.half_spacing();
    const Tolerances tols = tolerances_from_config(cfg);

    ReductionOptions ropts = reduction_options_from_config(cfg);
    ropts.window = window_from_config(cfg, profile);
    tols.apply(ropts);
    const ReductionContext ctx(profile, ropts);
    const RootReport report = det_roots(ctx);
    const LeadingPairs pairs = leading_eigenpairs(n, delta, profile.base_wall());

    // corrector size at the worst root, using the near-kernel direction of M
    double correction_norm = 0.0;
    for (double root : report.roots) {
        const ReducedMatrix m = ctx.assemble(root);
        const Eigen::MatrixXcd herm = (0.5 * (m.M() + m.M().adjoint())).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
        int k = 0;
        eig.eigenvalues().cwiseAbs().minCoeff(&k);
        const Corrector corr = ctx.corrector(eig.eigenvectors().col(k), root);
        correction_norm = std::max(correction_norm, corr.norm);
    }

    const Grid grid = grid_from_config(cfg, profile);
    SolverOptions wopts;
    wopts.window = ctx.window();
    tols.apply(wopts);
    const DiracSpectrum direct = dirac_spectrum_in_gap(profile, grid, wopts);
    std::vector<double> agreement;
    for (double root : report.roots) {
        double best = std::numeric_limits<double>::infinity();
        for (const GapState& s : direct.states) best = std::min(best, std::abs(root - s.E));
        agreement.push_back(best);
    }

    json out;
    out["n"] = n;
    out["delta"] = delta;
    out["a"] = pairs.a;
    out["leading_eigenvalues"] = pairs.values;
    out["det_roots"] = report.roots;
    out["direct_eigenvalues"] = [&] {
        std::vector<double> e;
        for (const GapState& s : direct.states) e.push_back(s.E);
        return e;
    }();
    out["correction_norm"] = correction_norm;
    out["agreement_with_direct"] = agreement;
    std::vector<std::string> warnings = report.warnings;
    warnings.insert(warnings.end(), direct.warnings.begin(), direct.warnings.end());
    if (report.roots.size() != direct.states.size())
        warnings.push_back("root count differs from the direct gap eigenvalue count");
    out["warnings"] = warnings;
    return out;
}

json run_asymptotics(const json& cfg) {
    check_keys(cfg, "config", {"profile", "deltas", "odd_wall"});
    const ProfileSpec spec = parse_profile_spec(cfg);
    if (spec.centers)
        throw invalid_parameter("asymptotics: closed forms need profile.n/delta, not centers");
    std::vector<double> deltas;
    if (cfg.contains("deltas"))
        deltas = cfg.at("deltas").get<std::vector<double>>();
    else if (spec.delta)
        deltas.push_back(*spec.delta);
    else
        throw invalid_parameter("asymptotics: provide profile.delta or a deltas list");
    for (double d : deltas)
        if (!(d > 0.0)) throw invalid_parameter("config: deltas must be positive");
    const bool odd_wall = cfg.value("odd_wall", true);

    json rows = json::array();
    for (double d : deltas) {
        const LeadingPairs pairs = leading_eigenpairs(spec.n, d, spec.base);
        rows.push_back({{"delta", d},
                        {"a", pairs.a},
                        {"eigenvalues", asymptotic_eigenvalues(spec.n, d, spec.base, odd_wall)}});
    }
    json out;
    out["n"] = spec.n;
    out["rows"] = rows;
    return out;
}

constexpr int kSweepCols = 17;
const char* kSweepHeader =
    "delta,n,a,e_asymp_plus,e_witten_plus,e_witten_minus,e_witten_zero,"
    "e_shoot_plus,e_shoot_minus,e_shoot_zero,root_plus,root_minus,root_zero,"
    "eigfn_err_plus,eigfn_err_minus,cross_method_max_diff,error";

// plus = largest, minus = smallest, zero = middle entry of an odd-length list
void fill_triplet(std::vector<std::string>& cells, int base, const std::vector<double>& v) {
    if (v.empty()) return;
    cells[base] = fmt(v.back());
    cells[base + 1] = fmt(v.front());
    if (v.size() % 2 == 1) cells[base + 2] = fmt(v[v.size() / 2]);
}

void sweep_row(const json& cfg, const ProfileSpec& spec, double delta,
               std::vector<std::string>& cells, std::string& flag) {
    const MassProfile profile = glue_spec(spec, delta);
    const int n = spec.n;
    const Tolerances tols = tolerances_from_config(cfg);

    const LeadingPairs pairs = leading_eigenpairs(n, delta, spec.base);
    cells[2] = fmt(pairs.a);
    cells[3] = fmt(pairs.values.back());

    const Grid grid = grid_from_config(cfg, profile);
    const double window = window_from_config(cfg, profile);
    SolverOptions wopts;
    wopts.window = window;
    tols.apply(wopts);
    const DiracSpectrum direct = dirac_spectrum_in_gap(profile, grid, wopts);
    std::vector<double> witten_e;
    for (const GapState& s : direct.states) witten_e.push_back(s.E);
    fill_triplet(cells, 4, witten_e);

    ShootingOptions sopts;
    sopts.window = window;
    sopts.hints = witten_e;
    tols.apply(sopts);
    const ShootingResult shoot = shooting_oracle(profile, sopts);
    fill_triplet(cells, 7, shoot.energies);

    if (witten_e.size() == shoot.energies.size() && !witten_e.empty()) {
        double diff = 0.0;
        for (std::size_t i = 0; i < witten_e.size(); ++i)
            diff = std::max(diff, std::abs(witten_e[i] - shoot.energies[i]));
        cells[15] = fmt(diff);
        if (diff > 1e-6 && flag.empty()) flag = "cross-method disagreement " + fmt(diff);
    } else if (flag.empty()) {
        flag = "method eigenvalue counts differ";
    }

    if (static_cast<int>(direct.states.size()) == n) {
        const ApproximateEigenfunctions approx = approximate_eigenfunctions(n, delta, spec.base);
        cells[13] = fmt(state_distance(direct.states.back(), grid, approx.functions.back()));
        cells[14] = fmt(state_distance(direct.states.front(), grid, approx.functions.front()));
    } else if (flag.empty()) {
        flag = "expected " + std::to_string(n) + " direct eigenvalues, got " +
               std::to_string(direct.states.size());
    }

    ReductionOptions ropts = reduction_options_from_config(cfg);
    ropts.window = window;
    tols.apply(ropts);
    const ReductionContext ctx(profile, ropts);
    const RootReport roots = det_roots(ctx);
    fill_triplet(cells, 10, roots.roots);
}

json run_sweep(const json& cfg, const std::filesystem::path& out_dir, int jobs) {
    check_keys(cfg, "config",
               {"profile", "grid", "window", "reduction", "deltas", "tolerances"});
    const ProfileSpec spec = parse_profile_spec(cfg);
    if (spec.centers) throw invalid_parameter("sweep: needs profile.n, not centers");
    if (spec.n < 2) throw invalid_parameter("sweep: needs n >= 2 walls");
    std::vector<double> deltas;
    if (cfg.contains("deltas")) deltas = cfg.at("deltas").get<std::vector<double>>();
    for (double d : deltas)
        if (!(d > 0.0)) throw invalid_parameter("config: deltas must be positive");

    std::vector<std::string> rows(deltas.size());
    std::vector<std::string> flags(deltas.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < deltas.size(); i = next++) {
            std::vector<std::string> cells(kSweepCols);
            cells[0] = fmt(deltas[i]);
            cells[1] = std::to_string(spec.n);
            try {
                sweep_row(cfg, spec, deltas[i], cells, flags[i]);
            } catch (const std::exception& e) {
                flags[i] = e.what();
            }
            cells[16] = csv_escape(flags[i]);
            std::string row = cells[0];
            for (int c = 1; c < kSweepCols; ++c) {
                row += ',';
                row += cells[c];
            }
            rows[i] = row;
        }
    };
    const int pool = std::max(1, std::min<int>(jobs, static_cast<int>(deltas.size())));
    if (pool <= 1 || deltas.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    const auto csv_path = out_dir / "sweep.csv";
    std::ofstream out = open_csv(csv_path);
    out << "# dwdirac sweep v1\n" << kSweepHeader << '\n';
    for (const std::string& row : rows) out << row << '\n';
    out.close();

    json row_errors = json::array();
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (!flags[i].empty()) row_errors.push_back({{"delta", deltas[i]}, {"error", flags[i]}});
    json res;
    res["csv"] = csv_path.string();
    res["rows"] = deltas.size();
    res["row_errors"] = row_errors;
    return res;
}

json run_fit(const json& cfg) {
    check_keys(cfg, "config", {"samples", "csv", "x_column", "y_column"});
    std::vector<std::pair<double, double>> samples;
    if (cfg.contains("samples")) {
        for (const json& s : cfg.at("samples")) {
            if (!s.is_array() || s.size() != 2)
                throw invalid_parameter("config: samples must be [x, error] pairs");
            samples.emplace_back(s[0].get<double>(), s[1].get<double>());
        }
    } else if (cfg.contains("csv")) {
        const std::string path = cfg.at("csv").get<std::string>();
        const std::string xcol = cfg.value("x_column", std::string("delta"));
        if (!cfg.contains("y_column"))
            throw invalid_parameter("config: fit from csv needs y_column");
        const std::string ycol = cfg.at("y_column").get<std::string>();
        std::ifstream in(path);
        if (!in) throw invalid_parameter("fit: cannot open " + path);
        std::string line;
        std::vector<std::string> header;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            header = split_csv(line);
            break;
        }
        const auto col = [&](const std::string& name) {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end())
                throw invalid_parameter("fit: column \"" + name + "\" not found in " + path);
            return static_cast<int>(it - header.begin());
        };
        const int xi = col(xcol), yi = col(ycol);
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const std::vector<std::string> cells = split_csv(line);
            if (static_cast<int>(cells.size()) <= std::max(xi, yi)) continue;
            if (cells[xi].empty() || cells[yi].empty()) continue; // error-flagged row
            try {
                samples.emplace_back(std::stod(cells[xi]), std::stod(cells[yi]));
            } catch (const std::exception&) {
                continue;
            }
        }
    } else {
        throw invalid_parameter("config: fit needs \"samples\" or \"csv\"");
    }

    const DecayFit f = fit_decay_rate(samples);
    json out;
    out["slope"] = f.slope;
    out["intercept"] = f.intercept;
    out["max_log_residual"] = f.max_log_residual;
    out["count"] = f.samples.size();
    json used = json::array();
    for (const auto& [x, y] : f.samples) used.push_back(json::array({x, y}));
    out["samples"] = used;
    return out;
}

json run_dump(const json& cfg, const std::filesystem::path& out_dir) {
    check_keys(cfg, "config", {"profile", "grid"});
    const ProfileSpec spec = parse_profile_spec(cfg);
    const MassProfile profile = build_profile(spec);
    Grid grid{0.0, 0};
    if (cfg.contains("grid")) {
        grid = grid_from_config(cfg, profile);
    } else {
        grid = {outermost(profile) + 8.0 / profile.kappa_inf(), 4001};
    }

    std::vector<std::string> files;
    {
        const Antiderivative K(profile);
        const auto path = out_dir / "profile.csv";
        std::ofstream out = open_csv(path);
        out << "# dwdirac profile v1\n";
        out << "x,kappa,antiderivative\n";
        for (int i = 0; i < grid.N; ++i) {
            const double x = grid.x(i);
            out << fmt(x) << ',' << fmt(profile.kappa(x)) << ',' << fmt(K(x)) << '\n';
        }
        files.push_back(path.string());
    }
    const int n = static_cast<int>(profile.walls().size());
    if (n % 2 == 1) {
        const AnalyticMode star = exact_zero_mode(profile);
        const auto path = out_dir / "zero_mode.csv";
        write_mode_csv(path, grid, star);
        files.push_back(path.string());
    }
    if (n >= 2 && profile.half_spacing()) {
        const ApproximateEigenfunctions approx =
            approximate_eigenfunctions(n, *profile.half_spacing(), profile.base_wall());
        const auto plus = out_dir / "mode_plus.csv";
        const auto minus = out_dir / "mode_minus.csv";
        write_mode_csv(plus, grid, approx.functions.back());
        write_mode_csv(minus, grid, approx.functions.front());
        files.push_back(plus.string());
        files.push_back(minus.string());
    }
    json out;
    out["files"] = files;
    out["L"] = grid.L;
    out["N"] = grid.N;
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"domain-wall Dirac operator experiments"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 12345;
    int jobs = 1;
    app.add_option("--config", config_path, "JSON experiment config");
    auto* out_opt = app.add_option("--out", out_dir, "output directory for CSV/JSON artifacts");
    app.add_option("--seed", seed, "seed recorded in output metadata");
    app.add_option("--jobs", jobs, "sweep worker threads")->check(CLI::PositiveNumber);

    CLI::App* verbs[] = {
        app.add_subcommand("spectrum", "gap eigenvalues of one profile"),
        app.add_subcommand("reduce", "determinant roots of the reduced matrix"),
        app.add_subcommand("asymptotics", "closed-form leading eigenvalues"),
        app.add_subcommand("sweep", "per-delta comparison table as CSV"),
        app.add_subcommand("fit", "decay-rate fit of (delta, error) samples"),
        app.add_subcommand("dump", "figure data CSVs"),
    };
    for (CLI::App* v : verbs) v->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const json cfg = load_config(config_path);
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);

        json out;
        std::string verb;
        if (verbs[0]->parsed()) {
            verb = "spectrum";
            out = run_spectrum(cfg, dir);
        } else if (verbs[1]->parsed()) {
            verb = "reduce";
            out = run_reduce(cfg);
        } else if (verbs[2]->parsed()) {
            verb = "asymptotics";
            out = run_asymptotics(cfg);
        } else if (verbs[3]->parsed()) {
            verb = "sweep";
            out = run_sweep(cfg, dir, jobs);
        } else if (verbs[4]->parsed()) {
            verb = "fit";
            out = run_fit(cfg);
        } else {
            verb = "dump";
            out = run_dump(cfg, dir);
        }
        out["schema"] = "dwdirac/v1";
        out["verb"] = verb;
        out["config"] = cfg;
        out["seed"] = seed;

        const std::string text = out.dump(2);
        std::cout << text << '\n';
        if (out_opt->count() > 0) {
            std::ofstream f(dir / (verb + ".json"));
            if (!f) throw invalid_parameter("cannot write " + (dir / (verb + ".json")).string());
            f << text << '\n';
        }
        return 0;
    } catch (const invalid_parameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
