#include "matterwave/cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "matterwave/dataset.hpp"
#include "matterwave/dispersion.hpp"
#include "matterwave/errors.hpp"
#include "matterwave/lattice.hpp"
#include "matterwave/model.hpp"
#include "matterwave/pseudoforce.hpp"

namespace matterwave::cli {

namespace {

using dataset::Cell;
using dataset::Dataset;
using model::BeamParameters;
using model::Material;
using model::ScreeningConvention;

constexpr const char* kOutputDirEnv = "MATTERWAVE_OUTPUT_DIR";

std::string bool_cell(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// Shared option state
// ---------------------------------------------------------------------------

struct Common {
    std::string format = "csv";
    std::string output;
    std::string convention = "primary";
    std::string materials_file;
};

ScreeningConvention parse_convention(const std::string& s) {
    return s == "paper-compat" ? ScreeningConvention::paper_compat : ScreeningConvention::primary;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", c.output,
                    "Destination file (default: stdout). A bare filename is placed under "
                    "$MATTERWAVE_OUTPUT_DIR when that is set.");
}

void add_convention(CLI::App* cmd, Common& c) {
    cmd->add_option("--convention", c.convention, "Screening normalization")
        ->check(CLI::IsMember({"primary", "paper-compat"}))
        ->capture_default_str();
}

std::vector<Material> all_materials(const Common& c) {
    std::vector<Material> mats = model::builtin_materials();
    if (!c.materials_file.empty()) {
        auto extra = model::load_materials_file(c.materials_file);
        mats.insert(mats.end(), extra.begin(), extra.end());
    }
    return mats;
}

const Material& find_material(const std::vector<Material>& mats, const std::string& name) {
    for (const auto& m : mats)
        if (m.name == name) return m;
    throw DomainError("unknown material '" + name + "'");
}

int emit(const Dataset& d, const Common& c, std::ostream& out, std::ostream& err) {
    const std::string text = c.format == "json" ? dataset::to_json(d) : dataset::to_csv(d);
    if (c.output.empty()) {
        out << text;
        return 0;
    }
    std::string path = c.output;
    const char* dir = std::getenv(kOutputDirEnv);
    if (dir && *dir && path.find('/') == std::string::npos)
        path = std::string(dir) + "/" + path;
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "--output: cannot open '" << path << "' for writing\n";
        return 2;
    }
    f << text;
    return 0;
}

void stamp(Dataset& d, const std::string& command, const Common& c) {
    d.meta("generator", "matterwave " + command);
    d.meta("convention", c.convention);
}

// ---------------------------------------------------------------------------
// Single-shot commands
// ---------------------------------------------------------------------------

Dataset dispersion_dataset(double xi, double kmin, double kmax, int points) {
    auto curve = dispersion::sample_dispersion(xi, kmin, kmax, points);
    Dataset d;
    d.columns = {{"k", "k_p"}, {"E", "2E_p"}};
    d.meta("xi", xi);
    for (std::size_t i = 0; i < curve.k.size(); ++i)
        d.rows.push_back({curve.k[i], curve.energy[i]});
    return d;
}

Dataset dispersion_multi(const std::vector<double>& xis, double kmin, double kmax, int points,
                         bool with_free_particle) {
    Dataset d;
    d.columns = {{"k", "k_p"}};
    std::vector<dispersion::DispersionCurve> curves;
    for (double xi : xis) {
        curves.push_back(dispersion::sample_dispersion(xi, kmin, kmax, points));
        d.columns.push_back({"E_xi" + dataset::format_double(xi), "2E_p"});
    }
    if (with_free_particle) d.columns.push_back({"E_free", "2E_p"});
    for (int i = 0; i < points; ++i) {
        std::vector<Cell> row{curves[0].k[i]};
        for (auto& c : curves) row.emplace_back(c.energy[i]);
        if (with_free_particle) row.emplace_back(0.5 * curves[0].k[i] * curves[0].k[i]);
        d.rows.push_back(std::move(row));
    }
    return d;
}

void wavenumber_cells(const BeamParameters& beam, std::vector<Cell>& row) {
    const auto wn = dispersion::debroglie_wavenumbers(beam);
    row.emplace_back(wn.k1.real());
    row.emplace_back(wn.k1.imag());
    row.emplace_back(wn.k2.real());
    row.emplace_back(wn.k2.imag());
    if (beam.gamma > 0.0) {
        const auto [chi1, chi2] = dispersion::debroglie_coefficients(beam);
        row.emplace_back(chi1.real());
        row.emplace_back(chi1.imag());
        row.emplace_back(chi2.real());
        row.emplace_back(chi2.imag());
    } else {
        for (int i = 0; i < 4; ++i) row.emplace_back("singular-input");
    }
    row.emplace_back(std::string(dispersion::to_string(wn.regime.tag)));
    try {
        row.emplace_back(dispersion::relative_difference(beam));
    } catch (const Error& e) {
        row.emplace_back(e.name());
    }
}

const std::vector<dataset::Column> kWavenumberColumns = {
    {"k1_re", "k_p"}, {"k1_im", "k_p"}, {"k2_re", "k_p"}, {"k2_im", "k_p"},
    {"chi1_re", ""},  {"chi1_im", ""},  {"chi2_re", ""},  {"chi2_im", ""},
    {"regime", ""},   {"delta_k", ""},
};

Dataset solution_dataset(const pseudoforce::FieldSolution& sol, bool parts) {
    Dataset d;
    d.columns = {{"x", "1/k_p"}, {"phi", "E_p"}, {"psi", ""}};
    const struct {
        const char* name;
        const std::optional<pseudoforce::PartSamples>& part;
    } part_list[] = {
        {"homogeneous", sol.homogeneous},
        {"driven", sol.driven},
        {"transient", sol.transient},
        {"steady", sol.steady},
    };
    if (parts)
        for (const auto& p : part_list)
            if (p.part) {
                d.columns.push_back({std::string("phi_") + p.name, "E_p"});
                d.columns.push_back({std::string("psi_") + p.name, ""});
            }
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        std::vector<Cell> row{sol.x[i], sol.phi[i], sol.psi[i]};
        if (parts)
            for (const auto& p : part_list)
                if (p.part) {
                    row.emplace_back(p.part->phi[i]);
                    row.emplace_back(p.part->psi[i]);
                }
        d.rows.push_back(std::move(row));
    }
    return d;
}

Dataset bragg_dataset(double mu, double xi, const lattice::LatticeParameters& lat) {
    Dataset d;
    d.columns = {{"n", ""}, {"channel", ""}, {"gamma_res", "v_p"}, {"in_stable_window", ""}};
    d.meta("mu", mu);
    d.meta("xi", xi);
    d.meta("G", lat.G);
    for (const auto& r : lattice::bragg_resonant_speeds(mu, xi, lat))
        d.rows.push_back({static_cast<double>(r.n), std::string(lattice::to_string(r.channel)),
                          r.gamma_res, bool_cell(r.in_stable_window)});
    return d;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepRequest {
    std::string target = "wavenumbers";
    std::string var = "gamma";
    double lo = 0.0, hi = 0.0;
    long points = 0;
    // fixed parameters
    double gamma = 1.0, mu = 0.0, theta = 0.1, xi = 0.0, u0 = 0.1;
    double G = 2.0;
    int nmax = 1;
    std::string material; // overrides mu (and xi unless var == "xi")
    ScreeningConvention convention = ScreeningConvention::primary;
};

// One sweep row; pure so rows can be evaluated concurrently.
std::vector<Cell> sweep_row(const SweepRequest& rq, double v) {
    std::vector<Cell> row{v};
    std::string error;
    try {
        double gamma = rq.gamma, mu = rq.mu, theta = rq.theta, xi = rq.xi;
        if (rq.var == "gamma") gamma = v;
        else if (rq.var == "mu") mu = v;
        else if (rq.var == "theta") theta = v;
        else if (rq.var == "xi") xi = v;

        if (rq.target == "wavenumbers") {
            wavenumber_cells(BeamParameters(gamma, mu, theta, xi, rq.u0), row);
        } else if (rq.target == "steady") {
            const auto s = pseudoforce::steady_state(BeamParameters(gamma, mu, theta, xi, rq.u0));
            row.insert(row.end(), {s.amp_phi, s.theta_phi, s.amp_psi, s.theta_psi});
        } else if (rq.target == "critical") {
            const auto cs = dispersion::critical_speeds(mu, xi);
            row.insert(row.end(), {cs.gamma_low, cs.gamma_high, bool_cell(cs.window_empty)});
        } else if (rq.target == "screening") {
            row.emplace_back(model::screening_parameter(mu, theta, rq.convention));
        } else { // bragg: one row per harmonic, flattened by the caller
            throw DomainError("internal: bragg handled separately");
        }
    } catch (const Error& e) {
        error = e.name();
    }
    if (!error.empty()) {
        // keep the column count fixed; numeric cells become NaN
        const std::size_t want = rq.target == "wavenumbers" ? 11
                               : rq.target == "steady"      ? 5
                               : rq.target == "critical"    ? 4
                                                            : 2;
        while (row.size() < want) row.emplace_back(std::numeric_limits<double>::quiet_NaN());
        row.emplace_back(error);
    } else {
        row.emplace_back(std::string());
    }
    return row;
}

Dataset run_sweep(const SweepRequest& rq) {
    if (!(rq.lo < rq.hi)) throw DomainError("--lo must be < --hi");
    Dataset d;
    const dataset::Column var_col = {rq.var, rq.var == "gamma" ? "v_p"
                                           : rq.var == "G"     ? "k_p"
                                           : rq.var == "xi"    ? "k_p"
                                           : rq.var == "theta" ? "T_p"
                                                               : ""};
    d.meta("target", rq.target);
    d.meta("variable", rq.var);
    if (!rq.material.empty()) d.meta("material", rq.material);
    for (const auto& [k, v] : std::map<std::string, double>{{"gamma", rq.gamma},
                                                            {"mu", rq.mu},
                                                            {"theta", rq.theta},
                                                            {"xi", rq.xi},
                                                            {"u0", rq.u0},
                                                            {"G", rq.G}})
        if (k != rq.var) d.meta(k, v);

    std::vector<double> grid(rq.points);
    for (long i = 0; i < rq.points; ++i)
        grid[i] = rq.lo + (rq.hi - rq.lo) * static_cast<double>(i) / (rq.points - 1);
    grid.back() = rq.hi;

    if (rq.target == "bragg") {
        d.columns = {var_col, {"n", ""}, {"channel", ""}, {"gamma_res", "v_p"},
                     {"in_stable_window", ""}, {"error", ""}};
        for (double v : grid) {
            double mu = rq.mu, xi = rq.xi, g_vec = rq.G;
            if (rq.var == "mu") mu = v;
            else if (rq.var == "xi") xi = v;
            else if (rq.var == "G") g_vec = v;
            try {
                lattice::LatticeParameters lat(g_vec, 0.0, rq.nmax);
                for (const auto& r : lattice::bragg_resonant_speeds(mu, xi, lat))
                    d.rows.push_back({v, static_cast<double>(r.n),
                                      std::string(lattice::to_string(r.channel)), r.gamma_res,
                                      bool_cell(r.in_stable_window), std::string()});
            } catch (const Error& e) {
                d.rows.push_back({v, std::numeric_limits<double>::quiet_NaN(), std::string(),
                                  std::numeric_limits<double>::quiet_NaN(), std::string(),
                                  std::string(e.name())});
            }
        }
        return d;
    }

    d.columns = {var_col};
    if (rq.target == "wavenumbers")
        d.columns.insert(d.columns.end(), kWavenumberColumns.begin(), kWavenumberColumns.end());
    else if (rq.target == "steady")
        d.columns.insert(d.columns.end(),
                         {{"amp_phi", "E_p"}, {"theta_phi", "rad"}, {"amp_psi", ""}, {"theta_psi", "rad"}});
    else if (rq.target == "critical")
        d.columns.insert(d.columns.end(),
                         {{"gamma_low", "v_p"}, {"gamma_high", "v_p"}, {"window_empty", ""}});
    else if (rq.target == "screening")
        d.columns.push_back({"xi", "k_p"});
    d.columns.push_back({"error", ""});

    d.rows.resize(grid.size());
    const unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                                grid.size() > 512 ? 8u : 1u);
    if (workers > 1) {
        std::vector<std::thread> pool;
        std::size_t chunk = (grid.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk, e = std::min(grid.size(), b + chunk);
            pool.emplace_back([&, b, e]() {
                for (std::size_t i = b; i < e; ++i) d.rows[i] = sweep_row(rq, grid[i]);
            });
        }
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) d.rows[i] = sweep_row(rq, grid[i]);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Figure presets: pinned parameter sets with provenance in the metadata.
// ---------------------------------------------------------------------------

struct PresetNote {
    const char* note =
        "drive amplitudes, grids and point counts are tool defaults, not published values";
};

Dataset preset_dispersion(const std::string& name) {
    if (name == "fig1a") {
        Dataset d = dispersion_multi({0.0}, 0.05, 3.0, 600, /*free particle overlay*/ true);
        d.meta("preset", name);
        d.meta("note", PresetNote{}.note);
        return d;
    }
    if (name == "fig1b") {
        Dataset d = dispersion_multi({0.0, 0.25, 0.5, 0.75, 1.0}, 0.05, 3.0, 600, false);
        d.meta("preset", name);
        d.meta("note", PresetNote{}.note);
        return d;
    }
    throw DomainError("unknown dispersion preset '" + name + "' (use fig1a or fig1b)");
}

Dataset preset_bragg_multi(const std::string& name, double mu,
                           const std::vector<std::pair<std::string, double>>& xi_curves) {
    Dataset d;
    d.columns = {{"G", "k_p"}};
    d.meta("preset", name);
    d.meta("mu", mu);
    const int points = 600;
    std::vector<std::vector<double>> cols;
    for (const auto& [label, xi] : xi_curves) {
        d.columns.push_back({"gamma_res_" + label, "v_p"});
        std::vector<double> col;
        for (int i = 0; i < points; ++i) {
            const double g_vec = 0.05 + (3.0 - 0.05) * i / (points - 1);
            lattice::LatticeParameters lat(g_vec, 0.0, 1);
            col.push_back(lattice::bragg_resonant_speeds(mu, xi, lat).front().gamma_res);
        }
        cols.push_back(std::move(col));
    }
    for (int i = 0; i < points; ++i) {
        std::vector<Cell> row{0.05 + (3.0 - 0.05) * i / (points - 1)};
        for (const auto& c : cols) row.emplace_back(c[i]);
        d.rows.push_back(std::move(row));
    }
    d.meta("note", PresetNote{}.note);
    return d;
}

Dataset preset_sweep(const std::string& name, const Common& common) {
    const auto mats = all_materials(common);
    SweepRequest rq;
    rq.points = 600;
    auto material_beam = [&](const char* mat, ScreeningConvention conv, double* xi_out) {
        const auto& m = find_material(mats, mat);
        rq.material = m.name;
        rq.mu = m.mu0_eV / (2.0 * m.Ep_eV);
        rq.convention = conv;
        if (xi_out) {
            const double mu_for_xi =
                conv == ScreeningConvention::primary ? rq.mu : m.mu0_eV;
            *xi_out = model::screening_parameter(mu_for_xi, 0.1, conv);
        }
    };

    if (name == "fig2a" || name == "fig2c") {
        rq.target = "wavenumbers";
        rq.var = "gamma";
        rq.lo = 0.05;
        rq.hi = 3.0;
        rq.xi = name == "fig2c" ? 0.5 : 0.0;
    } else if (name == "fig2b") {
        rq.target = "critical";
        rq.var = "mu";
        rq.lo = 0.0;
        rq.hi = 3.0;
        rq.points = 601;
    } else if (name == "fig2d") {
        rq.target = "wavenumbers";
        rq.var = "xi";
        rq.lo = 0.0;
        rq.hi = 0.99;
        rq.gamma = 2.0;
    } else if (name == "fig3a-al" || name == "fig3b-ag") {
        rq.target = "wavenumbers";
        rq.var = "gamma";
        rq.lo = 0.05;
        rq.hi = 3.0;
        material_beam(name == "fig3a-al" ? "Al" : "Ag", ScreeningConvention::primary, nullptr);
        rq.xi = 0.0; // screening off
    } else if (name == "fig3c-al" || name == "fig3d-ag") {
        rq.target = "wavenumbers";
        rq.var = "gamma";
        rq.lo = 0.05;
        rq.hi = 3.0;
        material_beam(name == "fig3c-al" ? "Al" : "Ag", ScreeningConvention::paper_compat, &rq.xi);
    } else if (name == "fig4a-al" || name == "fig4a-ag") {
        rq.target = "bragg";
        rq.var = "G";
        rq.lo = 0.05;
        rq.hi = 3.0;
        material_beam(name == "fig4a-al" ? "Al" : "Ag", ScreeningConvention::primary, nullptr);
        rq.xi = 0.0;
    } else if (name == "fig4b") {
        return preset_bragg_multi(name, 0.0,
                                  {{"xi0", 0.0}, {"xi0.25", 0.25}, {"xi0.5", 0.5}, {"xi0.75", 0.75}});
    } else if (name == "fig4c-al" || name == "fig4c-ag") {
        rq.target = "bragg";
        rq.var = "G";
        rq.lo = 0.05;
        rq.hi = 3.0;
        material_beam(name == "fig4c-al" ? "Al" : "Ag", ScreeningConvention::paper_compat, &rq.xi);
    } else if (name == "fig4d-al") {
        const auto& m = find_material(mats, "Al");
        std::vector<std::pair<std::string, double>> curves;
        for (double th : {0.05, 0.1, 0.2})
            curves.emplace_back(
                "theta" + dataset::format_double(th),
                model::screening_parameter(m.mu0_eV, th, ScreeningConvention::paper_compat));
        Dataset d = preset_bragg_multi(name, m.mu0_eV / (2.0 * m.Ep_eV), curves);
        d.meta("material", m.name);
        return d;
    } else {
        throw DomainError("unknown sweep preset '" + name + "'");
    }
    Dataset d = run_sweep(rq);
    d.meta("preset", name);
    d.meta("note", PresetNote{}.note);
    return d;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"matterwave: plasmon dispersion, matter-wave stability and driven "
                 "field solutions for electron beams of arbitrary degeneracy"};
    app.require_subcommand(1);

    Common common;
    std::function<Dataset()> action;

    // ---- dispersion ----
    auto* disp = app.add_subcommand("dispersion", "Sample the plasmon energy dispersion E(k)");
    {
        auto xi = std::make_shared<double>(0.0);
        auto kmin = std::make_shared<double>(0.05);
        auto kmax = std::make_shared<double>(3.0);
        auto points = std::make_shared<int>(500);
        auto preset = std::make_shared<std::string>();
        disp->add_option("--xi", *xi, "Screening parameter")->check(CLI::NonNegativeNumber);
        disp->add_option("--kmin", *kmin, "Lowest wavenumber");
        disp->add_option("--kmax", *kmax, "Highest wavenumber");
        disp->add_option("--points", *points, "Sample count")->check(CLI::Range(2, 10000000));
        disp->add_option("--preset", *preset, "Pinned figure parameter set (fig1a, fig1b)");
        add_common(disp, common);
        disp->callback([=, &common, &action]() {
            if (!preset->empty()) {
                std::string p = *preset;
                action = [p]() { return preset_dispersion(p); };
            } else {
                action = [=]() {
                    Dataset d = dispersion_dataset(*xi, *kmin, *kmax, *points);
                    return d;
                };
            }
        });
    }

    // ---- wavenumbers ----
    auto* wnum = app.add_subcommand("wavenumbers",
                                    "de Broglie wavenumbers, coefficients and regime at one point");
    {
        auto gamma = std::make_shared<double>(1.0);
        auto mu = std::make_shared<double>(0.0);
        auto xi = std::make_shared<double>(0.0);
        auto theta = std::make_shared<double>(0.1);
        wnum->add_option("--gamma", *gamma, "Beam speed v/v_p")->check(CLI::NonNegativeNumber);
        wnum->add_option("--mu", *mu, "Chemical potential mu0/(2 Ep)");
        wnum->add_option("--xi", *xi, "Screening parameter")->check(CLI::NonNegativeNumber);
        wnum->add_option("--theta", *theta, "Fractional temperature")->check(CLI::PositiveNumber);
        add_common(wnum, common);
        wnum->callback([=, &action]() {
            action = [=]() {
                Dataset d;
                d.columns = {{"gamma", "v_p"}, {"mu", ""}, {"xi", "k_p"}};
                d.columns.insert(d.columns.end(), kWavenumberColumns.begin(),
                                 kWavenumberColumns.end());
                std::vector<Cell> row{*gamma, *mu, *xi};
                wavenumber_cells(BeamParameters(*gamma, *mu, *theta, *xi, 0.0), row);
                d.rows.push_back(std::move(row));
                return d;
            };
        });
    }

    // ---- regimes ----
    auto* reg = app.add_subcommand("regimes", "Critical speeds and regime classification");
    {
        auto mu = std::make_shared<double>(0.0);
        auto xi = std::make_shared<double>(0.0);
        auto gamma = std::make_shared<double>(-1.0);
        reg->add_option("--mu", *mu, "Chemical potential mu0/(2 Ep)")->check(CLI::NonNegativeNumber);
        reg->add_option("--xi", *xi, "Screening parameter")->check(CLI::NonNegativeNumber);
        reg->add_option("--gamma", *gamma, "Optional beam speed to classify");
        add_common(reg, common);
        reg->callback([=, &action]() {
            action = [=]() {
                Dataset d;
                d.columns = {{"gamma_low", "v_p"}, {"gamma_high", "v_p"}, {"window_empty", ""}};
                const auto cs = dispersion::critical_speeds(*mu, *xi);
                std::vector<Cell> row{cs.gamma_low, cs.gamma_high, bool_cell(cs.window_empty)};
                if (*gamma >= 0.0) {
                    d.columns.push_back({"regime", ""});
                    d.columns.push_back({"on_boundary", ""});
                    const auto rc = dispersion::classify_regime(*gamma, *mu, *xi);
                    row.emplace_back(std::string(dispersion::to_string(rc.tag)));
                    row.emplace_back(bool_cell(rc.on_boundary));
                    d.meta("gamma", *gamma);
                }
                d.meta("mu", *mu);
                d.meta("xi", *xi);
                d.rows.push_back(std::move(row));
                return d;
            };
        });
    }

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "Closed-form field solution Phi(x), Psi(x)");
    {
        auto system = std::make_shared<std::string>("undamped");
        auto gamma = std::make_shared<double>(2.0);
        auto mu = std::make_shared<double>(0.0);
        auto xi = std::make_shared<double>(0.0);
        auto theta = std::make_shared<double>(0.1);
        auto u0 = std::make_shared<double>(0.1);
        auto phi0 = std::make_shared<double>(0.0);
        auto psi0 = std::make_shared<double>(0.0);
        auto dphi0 = std::make_shared<double>(0.0);
        auto dpsi0 = std::make_shared<double>(0.0);
        auto xmax = std::make_shared<double>(20.0);
        auto points = std::make_shared<int>(4001);
        auto parts = std::make_shared<bool>(false);
        solve->add_option("--system", *system, "System type")
            ->check(CLI::IsMember({"undamped", "damped"}))
            ->capture_default_str();
        solve->add_option("--gamma", *gamma, "Beam speed v/v_p")->check(CLI::NonNegativeNumber);
        solve->add_option("--mu", *mu, "Chemical potential mu0/(2 Ep)");
        solve->add_option("--xi", *xi, "Screening parameter")->check(CLI::NonNegativeNumber);
        solve->add_option("--theta", *theta, "Fractional temperature")->check(CLI::PositiveNumber);
        solve->add_option("--u0", *u0, "Drive amplitude V0/Ep");
        solve->add_option("--phi0", *phi0, "Phi(0)");
        solve->add_option("--psi0", *psi0, "Psi(0)");
        solve->add_option("--dphi0", *dphi0, "Phi'(0) (damped system only)");
        solve->add_option("--dpsi0", *dpsi0, "Psi'(0) (damped system only)");
        solve->add_option("--xmax", *xmax, "Grid end")->check(CLI::PositiveNumber);
        solve->add_option("--points", *points, "Grid points")->check(CLI::Range(2, 10000000));
        solve->add_flag("--parts", *parts, "Emit the component decomposition as extra columns");
        add_common(solve, common);
        solve->callback([=, &action]() {
            if (*system == "undamped") {
                if (*dphi0 != 0.0)
                    throw CLI::ValidationError("--dphi0",
                                               "the undamped form fixes zero derivatives at x = 0");
                if (*dpsi0 != 0.0)
                    throw CLI::ValidationError("--dpsi0",
                                               "the undamped form fixes zero derivatives at x = 0");
                if (*xi != 0.0)
                    throw CLI::ValidationError("--xi",
                                               "the undamped system has no screening; use --system damped");
            }
            action = [=]() {
                const BeamParameters beam(*gamma, *mu, *theta, *xi, *u0);
                const pseudoforce::BoundaryConditions bc{*phi0, *psi0, *dphi0, *dpsi0};
                const auto grid = pseudoforce::uniform_grid(0.0, *xmax, *points);
                const auto sol = *system == "damped" ? pseudoforce::solve_damped(beam, grid, bc)
                                                     : pseudoforce::solve_undamped(beam, bc, grid);
                Dataset d = solution_dataset(sol, *parts);
                d.meta("system", *system);
                d.meta("gamma", *gamma);
                d.meta("mu", *mu);
                d.meta("xi", *xi);
                d.meta("u0", *u0);
                return d;
            };
        });
    }

    // ---- steady ----
    auto* steady = app.add_subcommand("steady", "Steady-state amplitude and phase of the "
                                                "persistent de Broglie oscillation");
    {
        auto gamma = std::make_shared<double>(2.0);
        auto mu = std::make_shared<double>(0.0);
        auto xi = std::make_shared<double>(0.2);
        auto theta = std::make_shared<double>(0.1);
        auto u0 = std::make_shared<double>(0.1);
        steady->add_option("--gamma", *gamma, "Beam speed v/v_p")->check(CLI::NonNegativeNumber);
        steady->add_option("--mu", *mu, "Chemical potential mu0/(2 Ep)");
        steady->add_option("--xi", *xi, "Screening parameter")->check(CLI::NonNegativeNumber);
        steady->add_option("--theta", *theta, "Fractional temperature")->check(CLI::PositiveNumber);
        steady->add_option("--u0", *u0, "Drive amplitude V0/Ep");
        add_common(steady, common);
        steady->callback([=, &action]() {
            action = [=]() {
                const BeamParameters beam(*gamma, *mu, *theta, *xi, *u0);
                const auto s = pseudoforce::steady_state(beam);
                const auto c = pseudoforce::damped_coefficients(beam.energy(), beam.xi, beam.kd());
                Dataset d;
                d.columns = {{"amp_phi", "E_p"},     {"theta_phi", "rad"}, {"amp_psi", ""},
                             {"theta_psi", "rad"},   {"eta1", ""},         {"eta2", ""},
                             {"beta1_re", "k_p"},    {"beta1_im", "k_p"},  {"beta2_re", "k_p"},
                             {"beta2_im", "k_p"}};
                d.rows.push_back({s.amp_phi, s.theta_phi, s.amp_psi, s.theta_psi, c.eta1, c.eta2,
                                  c.beta1.real(), c.beta1.imag(), c.beta2.real(), c.beta2.imag()});
                d.meta("gamma", *gamma);
                d.meta("mu", *mu);
                d.meta("xi", *xi);
                d.meta("u0", *u0);
                return d;
            };
        });
    }

    // ---- lattice ----
    auto* lat_cmd = app.add_subcommand("lattice", "Bloch-component response to a periodic lattice");
    {
        auto gamma = std::make_shared<double>(2.0);
        auto mu = std::make_shared<double>(0.0);
        auto theta = std::make_shared<double>(0.1);
        auto u0 = std::make_shared<double>(0.1);
        auto g_vec = std::make_shared<double>(3.0);
        auto ug = std::make_shared<double>(0.1);
        auto n = std::make_shared<int>(1);
        auto xmax = std::make_shared<double>(20.0);
        auto points = std::make_shared<int>(4001);
        auto bvp = std::make_shared<bool>(false);
        lat_cmd->add_option("--gamma", *gamma, "Beam speed v/v_p")->check(CLI::NonNegativeNumber);
        lat_cmd->add_option("--mu", *mu, "Chemical potential mu0/(2 Ep)");
        lat_cmd->add_option("--theta", *theta, "Fractional temperature")->check(CLI::PositiveNumber);
        lat_cmd->add_option("--u0", *u0, "Beam drive amplitude");
        lat_cmd->add_option("--G", *g_vec, "Reciprocal lattice vector")->check(CLI::PositiveNumber);
        lat_cmd->add_option("--ug", *ug, "Lattice potential amplitude");
        lat_cmd->add_option("--n", *n, "Harmonic index")->check(CLI::Range(1, 1000));
        lat_cmd->add_option("--xmax", *xmax, "Grid end")->check(CLI::PositiveNumber);
        lat_cmd->add_option("--points", *points, "Grid points")->check(CLI::Range(2, 10000000));
        lat_cmd->add_flag("--bvp", *bvp, "Solve the periodic boundary-value problem instead");
        add_common(lat_cmd, common);
        lat_cmd->callback([=, &action]() {
            action = [=]() {
                const BeamParameters beam(*gamma, *mu, *theta, 0.0, *u0);
                const lattice::LatticeParameters lp(*g_vec, *ug, std::max(1, *n));
                const auto grid = pseudoforce::uniform_grid(0.0, *xmax, *points);
                const auto sol = *bvp ? lattice::solve_lattice_bvp(beam, lp, grid)
                                      : lattice::lattice_bloch_response(beam, lp, *n, grid);
                Dataset d = solution_dataset(sol, false);
                d.meta("G", *g_vec);
                d.meta("ug", *ug);
                d.meta("n", static_cast<double>(*n));
                d.meta("gamma", *gamma);
                d.meta("mu", *mu);
                d.meta("u0", *u0);
                return d;
            };
        });
    }

    // ---- bragg ----
    auto* bragg = app.add_subcommand("bragg", "Bragg-resonant beam speeds for lattice harmonics");
    {
        auto mu = std::make_shared<double>(0.0);
        auto xi = std::make_shared<double>(0.0);
        auto theta = std::make_shared<double>(0.1);
        auto g_vec = std::make_shared<double>(2.0);
        auto nmax = std::make_shared<int>(3);
        auto material = std::make_shared<std::string>();
        bragg->add_option("--mu", *mu, "Chemical potential mu0/(2 Ep)")->check(CLI::NonNegativeNumber);
        bragg->add_option("--xi", *xi, "Screening parameter")->check(CLI::NonNegativeNumber);
        bragg->add_option("--theta", *theta, "Fractional temperature (material mode)")
            ->check(CLI::PositiveNumber);
        bragg->add_option("--G", *g_vec, "Reciprocal lattice vector")->check(CLI::PositiveNumber);
        bragg->add_option("--nmax", *nmax, "Highest harmonic")->check(CLI::Range(1, 1000));
        bragg->add_option("--material", *material, "Derive mu and xi from a material preset");
        add_convention(bragg, common);
        add_common(bragg, common);
        bragg->callback([=, &common, &action]() {
            action = [=, &common]() {
                double use_mu = *mu, use_xi = *xi;
                if (!material->empty()) {
                    const auto mats = all_materials(common);
                    const auto& m = find_material(mats, *material);
                    use_mu = m.mu0_eV / (2.0 * m.Ep_eV);
                    const auto conv = parse_convention(common.convention);
                    use_xi = model::screening_parameter(
                        conv == ScreeningConvention::primary ? use_mu : m.mu0_eV, *theta, conv);
                }
                Dataset d = bragg_dataset(use_mu, use_xi, {*g_vec, 0.0, *nmax});
                if (!material->empty()) {
                    d.meta("material", *material);
                    d.meta("theta", *theta);
                }
                return d;
            };
        });
    }

    // ---- material ----
    auto* mat_cmd = app.add_subcommand("material", "Material constants, plasmon scales and "
                                                   "screening parameter");
    {
        auto name = std::make_shared<std::string>("Al");
        auto theta = std::make_shared<double>(0.1);
        mat_cmd->add_option("--name", *name, "Material name (built in: Al, Ag)");
        mat_cmd->add_option("--theta", *theta, "Fractional temperature")->check(CLI::PositiveNumber);
        add_convention(mat_cmd, common);
        mat_cmd->add_option("--materials", common.materials_file,
                            "Extra material presets (key=value config file)");
        add_common(mat_cmd, common);
        mat_cmd->callback([=, &common, &action]() {
            action = [=, &common]() {
                const auto mats = all_materials(common);
                const auto& m = find_material(mats, *name);
                const auto scales = model::material_scales(m);
                const double mu = m.mu0_eV / (2.0 * m.Ep_eV);
                const double xi_primary =
                    model::screening_parameter(mu, *theta, ScreeningConvention::primary);
                const double xi_compat = model::screening_parameter(
                    m.mu0_eV, *theta, ScreeningConvention::paper_compat);
                Dataset d;
                d.columns = {{"mu0", "eV"},      {"Ep", "eV"},          {"k_p", "1/m"},
                             {"v_p", "m/s"},     {"T_p", "K"},          {"omega_p", "1/s"},
                             {"mu", ""},         {"xi_primary", "k_p"}, {"xi_paper_compat", "k_p"},
                             {"xi_active", "k_p"}};
                const double xi_active =
                    parse_convention(common.convention) == ScreeningConvention::primary
                        ? xi_primary
                        : xi_compat;
                d.rows.push_back({m.mu0_eV, m.Ep_eV, scales.k_p, scales.v_p, scales.T_p,
                                  scales.omega_p, mu, xi_primary, xi_compat, xi_active});
                d.meta("material", m.name);
                d.meta("theta", *theta);
                d.meta("note", "xi_primary and xi_paper_compat differ by construction; "
                               "the conventions normalize mu differently");
                return d;
            };
        });
    }

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep of a target operation");
    {
        auto rq = std::make_shared<SweepRequest>();
        auto preset = std::make_shared<std::string>();
        sweep->add_option("--target", rq->target, "Swept operation")
            ->check(CLI::IsMember({"wavenumbers", "steady", "critical", "bragg", "screening"}))
            ->capture_default_str();
        sweep->add_option("--var", rq->var, "Sweep variable")
            ->check(CLI::IsMember({"gamma", "mu", "theta", "xi", "G"}))
            ->capture_default_str();
        sweep->add_option("--lo", rq->lo, "Range start");
        sweep->add_option("--hi", rq->hi, "Range end");
        sweep->add_option("--points", rq->points, "Grid points")->check(CLI::Range(2, 10000000));
        sweep->add_option("--gamma", rq->gamma, "Fixed beam speed");
        sweep->add_option("--mu", rq->mu, "Fixed chemical potential");
        sweep->add_option("--theta", rq->theta, "Fixed fractional temperature");
        sweep->add_option("--xi", rq->xi, "Fixed screening parameter");
        sweep->add_option("--u0", rq->u0, "Fixed drive amplitude");
        sweep->add_option("--G", rq->G, "Fixed lattice vector");
        sweep->add_option("--nmax", rq->nmax, "Bragg harmonics")->check(CLI::Range(1, 1000));
        sweep->add_option("--material", rq->material, "Derive mu (and xi) from a material preset");
        sweep->add_option("--preset", *preset,
                          "Pinned figure parameter set (fig2a..fig2d, fig3a-al..fig3d-ag, "
                          "fig4a-al..fig4d-al); other parameter flags are rejected");
        add_convention(sweep, common);
        sweep->add_option("--materials", common.materials_file,
                          "Extra material presets (key=value config file)");
        add_common(sweep, common);
        sweep->callback([=, &common, &action]() {
            const bool pinned = !preset->empty();
            if (pinned) {
                for (const auto* flag : {"--target", "--var", "--lo", "--hi", "--points",
                                         "--gamma", "--mu", "--theta", "--xi", "--u0", "--G",
                                         "--nmax", "--material"})
                    if (sweep->count(flag) > 0)
                        throw CLI::ValidationError("--preset", std::string("pins all parameters; "
                                                                           "remove ") + flag);
                std::string p = *preset;
                action = [p, &common]() { return preset_sweep(p, common); };
                return;
            }
            for (const auto* flag : {"--lo", "--hi", "--points"})
                if (sweep->count(flag) == 0)
                    throw CLI::ValidationError(flag, "is required without --preset");
            if (!(rq->lo < rq->hi))
                throw CLI::ValidationError("--lo", "must be below --hi");
            static const std::map<std::string, std::vector<std::string>> allowed_vars = {
                {"wavenumbers", {"gamma", "mu", "xi"}}, {"steady", {"gamma", "mu", "xi"}},
                {"critical", {"mu", "xi"}},             {"screening", {"mu", "theta"}},
                {"bragg", {"G", "mu", "xi"}},
            };
            const auto& ok_vars = allowed_vars.at(rq->target);
            if (std::find(ok_vars.begin(), ok_vars.end(), rq->var) == ok_vars.end())
                throw CLI::ValidationError("--var", "'" + rq->var + "' is not an input of target '" +
                                                        rq->target + "'");
            action = [=, &common]() {
                SweepRequest r = *rq;
                r.convention = parse_convention(common.convention);
                if (!r.material.empty()) {
                    const auto mats = all_materials(common);
                    const auto& m = find_material(mats, r.material);
                    r.mu = m.mu0_eV / (2.0 * m.Ep_eV);
                    if (r.var != "xi" && sweep->count("--xi") == 0)
                        r.xi = model::screening_parameter(
                            r.convention == ScreeningConvention::primary ? r.mu : m.mu0_eV,
                            r.theta, r.convention);
                }
                return run_sweep(r);
            };
        });
    }

    // ---- parse and execute ----
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "invalid request: " << e.what() << "\n";
        return 2;
    }

    try {
        Dataset d = action();
        // common metadata goes first
        Dataset stamped;
        stamped.columns = std::move(d.columns);
        stamped.rows = std::move(d.rows);
        stamp(stamped, app.get_subcommands().front()->get_name(), common);
        for (auto& kv : d.metadata) stamped.metadata.push_back(std::move(kv));
        return emit(stamped, common, out, err);
    } catch (const Error& e) {
        err << "computation error [" << e.name() << "]: " << e.what() << "\n";
        return 3;
    }
}

} // namespace matterwave::cli
