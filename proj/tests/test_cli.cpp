#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <random>

#include <json.hpp>

#include "matterwave/cli.hpp"
#include "matterwave/dataset.hpp"
#include "matterwave/dispersion.hpp"
#include "matterwave/model.hpp"

using namespace matterwave;

namespace {

struct RunResult {
    int status;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

// Minimal CSV reader for the tool's own output: '#' metadata, header, cells.
struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name || header[i].rfind(name + "[", 0) == 0) return i;
        throw std::runtime_error("no column " + name);
    }
    double num(std::size_t row, const std::string& name) const {
        return std::strtod(rows[row][col(name)].c_str(), nullptr);
    }
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (!have_header) {
            csv.header = cells;
            have_header = true;
        } else {
            csv.rows.push_back(cells);
        }
    }
    return csv;
}

} // namespace

TEST_CASE("identical requests give byte-identical output") {
    const std::vector<std::string> args = {"sweep", "--target", "wavenumbers", "--var", "gamma",
                                           "--lo", "0.1", "--hi", "3", "--points", "700",
                                           "--mu", "0", "--xi", "0"};
    const auto a = run(args), b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    const auto c = run({"dispersion", "--xi", "0.5", "--kmin", "0.1", "--kmax", "2", "--points",
                        "333", "--format", "json"});
    const auto d = run({"dispersion", "--xi", "0.5", "--kmin", "0.1", "--kmax", "2", "--points",
                        "333", "--format", "json"});
    CHECK(c.out == d.out);
}

TEST_CASE("dispersion dataset has its minimum at the beating point") {
    const auto r = run({"dispersion", "--xi", "0", "--kmin", "0.2", "--kmax", "3", "--points",
                        "500"});
    REQUIRE(r.status == 0);
    const auto csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 500);
    double emin = 1e300, kmin = 0.0;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const double e = csv.num(i, "E");
        if (e < emin) {
            emin = e;
            kmin = csv.num(i, "k");
        }
    }
    CHECK(emin == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(kmin - 1.0) <= (3.0 - 0.2) / 499.0);
}

TEST_CASE("bragg rows satisfy the resonance relation") {
    const auto r = run({"bragg", "--material", "Al", "--theta", "0.1", "--G", "2", "--nmax", "3",
                        "--convention", "paper-compat"});
    REQUIRE(r.status == 0);
    const auto csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 3);
    // recompute from the metadata-normalized constants
    const double mu = 11.7 / 30.0;
    const double xi =
        model::screening_parameter(11.7, 0.1, model::ScreeningConvention::paper_compat);
    for (std::size_t i = 0; i < 3; ++i) {
        const double n = csv.num(i, "n");
        const double gamma = csv.num(i, "gamma_res");
        const double u = n * n * 4.0 + xi * xi;
        const double E = 0.5 * (gamma * gamma - mu);
        CHECK(std::abs(E - (1.0 + u * u) / (2.0 * u)) <= 1e-10);
    }
}

TEST_CASE("material report emits both screening conventions") {
    const auto r = run({"material", "--name", "Ag", "--theta", "0.1", "--convention",
                        "paper-compat"});
    REQUIRE(r.status == 0);
    const auto csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 1);
    CHECK(std::abs(csv.num(0, "xi_paper_compat") - 0.36951) <= 1e-5);
    CHECK(std::abs(csv.num(0, "xi_active") - 0.36951) <= 1e-5);
    CHECK(std::abs(csv.num(0, "xi_primary") - csv.num(0, "xi_paper_compat")) > 0.1);
    CHECK(csv.num(0, "mu") == doctest::Approx(5.49 / 7.52).epsilon(1e-12));
    CHECK(csv.num(0, "k_p") == doctest::Approx(9.93e9).epsilon(0.01));
}

TEST_CASE("gamma sweep reproduces the classical stability transition") {
    const auto r = run({"sweep", "--target", "wavenumbers", "--var", "gamma", "--lo", "0.1",
                        "--hi", "3", "--points", "300", "--mu", "0", "--xi", "0"});
    REQUIRE(r.status == 0);
    const auto csv = parse_csv(r.out);
    const double g_cr = std::sqrt(2.0);
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const double g = csv.num(i, "gamma");
        const double imag_norm = std::abs(csv.num(i, "k1_im")) + std::abs(csv.num(i, "k2_im"));
        if (g < g_cr - 1e-9)
            CHECK(imag_norm > 0.0);
        else
            CHECK(imag_norm == 0.0);
    }
}

TEST_CASE("xi sweep shows the wave branch destabilizing first") {
    const auto r = run({"sweep", "--target", "wavenumbers", "--var", "xi", "--lo", "0", "--hi",
                        "0.99", "--points", "200", "--gamma", "2", "--mu", "0"});
    REQUIRE(r.status == 0);
    const auto csv = parse_csv(r.out);
    bool wave_unstable = false;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        CHECK(csv.num(i, "k2_im") == 0.0); // particle branch stays real at gamma = 2
        if (std::abs(csv.num(i, "k1_im")) > 0.0) wave_unstable = true;
    }
    CHECK(wave_unstable);
    // transition at xi^2 = 2 - sqrt(3)
    const double xi_cut = std::sqrt(2.0 - std::sqrt(3.0));
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const double xi = csv.num(i, "xi");
        if (xi > xi_cut + 1e-9) CHECK(std::abs(csv.num(i, "k1_im")) > 0.0);
    }
}

TEST_CASE("sweep emits exactly one row per grid point and tags failed rows") {
    const auto two = run({"sweep", "--target", "critical", "--var", "mu", "--lo", "0", "--hi",
                          "1", "--points", "2", "--xi", "0.5"});
    REQUIRE(two.status == 0);
    CHECK(parse_csv(two.out).rows.size() == 2);

    // steady state needs xi > 0: every row carries the module error name
    const auto errs = run({"sweep", "--target", "steady", "--var", "gamma", "--lo", "0.5", "--hi",
                           "2.5", "--points", "5", "--mu", "0", "--xi", "0"});
    REQUIRE(errs.status == 0);
    const auto csv = parse_csv(errs.out);
    REQUIRE(csv.rows.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(csv.rows[i][csv.col("error")] == "domain-error");
}

TEST_CASE("sweep rows are recomputable from their input columns") {
    const auto r = run({"sweep", "--target", "wavenumbers", "--var", "gamma", "--lo", "0.3",
                        "--hi", "2.7", "--points", "41", "--mu", "0.2", "--xi", "0.3"});
    REQUIRE(r.status == 0);
    const auto csv = parse_csv(r.out);
    for (std::size_t i = 0; i < csv.rows.size(); i += 7) {
        const double g = csv.num(i, "gamma");
        const auto wn = dispersion::debroglie_wavenumbers(
            model::BeamParameters(g, 0.2, 0.1, 0.3, 0.1));
        CHECK(csv.num(i, "k1_re") == doctest::Approx(wn.k1.real()).epsilon(1e-15));
        CHECK(csv.num(i, "k1_im") == doctest::Approx(wn.k1.imag()).epsilon(1e-15));
        CHECK(csv.num(i, "k2_re") == doctest::Approx(wn.k2.real()).epsilon(1e-15));
    }
}

TEST_CASE("json output carries the schema block and column arrays") {
    const auto r = run({"wavenumbers", "--gamma", "2", "--mu", "0", "--xi", "0", "--format",
                        "json"});
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.contains("schema"));
    CHECK(j["schema"]["metadata"]["convention"] == "primary");
    const auto& cols = j["schema"]["columns"];
    REQUIRE(j.contains("data"));
    CHECK(j["data"].size() == cols.size());
    REQUIRE(j["data"]["k2_re"].size() == 1);
    CHECK(j["data"]["k2_re"][0].get<double>() == doctest::Approx(1.9318516525781366));
    CHECK(j["data"]["regime"][0] == "both-real");
    bool found = false;
    for (const auto& c : cols)
        if (c["name"] == "k2_re") {
            found = true;
            CHECK(c["unit"] == "k_p");
        }
    CHECK(found);
}

TEST_CASE("validation failures exit 2 and name the flag") {
    const auto unknown = run({"dispersion", "--frobnicate", "1"});
    CHECK(unknown.status == 2);
    const auto badpoints = run({"dispersion", "--points", "1"});
    CHECK(badpoints.status == 2);
    CHECK(badpoints.err.find("--points") != std::string::npos);
    const auto nocmd = run({});
    CHECK(nocmd.status == 2);
    const auto badrange = run({"sweep", "--target", "critical", "--var", "mu", "--lo", "2",
                               "--hi", "1", "--points", "10"});
    CHECK(badrange.status == 2);
    CHECK(badrange.err.find("--lo") != std::string::npos);
    const auto missing = run({"sweep", "--target", "critical", "--var", "mu"});
    CHECK(missing.status == 2);
    // flag-level preconditions of the target operation
    const auto badvar = run({"sweep", "--target", "bragg", "--var", "gamma", "--lo", "0.1",
                             "--hi", "2", "--points", "5"});
    CHECK(badvar.status == 2);
    CHECK(badvar.err.find("--var") != std::string::npos);
    const auto badbc = run({"solve", "--system", "undamped", "--gamma", "2", "--dphi0", "0.5"});
    CHECK(badbc.status == 2);
    CHECK(badbc.err.find("--dphi0") != std::string::npos);
    const auto badxi = run({"solve", "--system", "undamped", "--gamma", "2", "--xi", "0.3"});
    CHECK(badxi.status == 2);
    CHECK(badxi.err.find("--xi") != std::string::npos);
}

TEST_CASE("computation failures exit 3 and name the module error") {
    // gamma = sqrt(2), mu = 0: E = 1, degenerate branches
    const auto degen = run({"solve", "--system", "undamped", "--gamma", "1.4142135623730951",
                            "--mu", "0", "--u0", "0.1"});
    CHECK(degen.status == 3);
    CHECK(degen.err.find("degenerate-eigenvalue") != std::string::npos);

    // lattice harmonic on the particle branch
    const auto reso = run({"lattice", "--gamma", "2", "--mu", "0", "--G", "1.9318516525781366",
                           "--n", "1"});
    CHECK(reso.status == 3);
    CHECK(reso.err.find("resonant-input") != std::string::npos);

    // incommensurate periodic boundary-value problem
    const auto inc = run({"lattice", "--gamma", "2.3", "--mu", "0", "--G", "2", "--bvp"});
    CHECK(inc.status == 3);
    CHECK(inc.err.find("incommensurate-drive") != std::string::npos);

    const auto unknown_mat = run({"material", "--name", "Unobtainium"});
    CHECK(unknown_mat.status == 3);
    CHECK(unknown_mat.err.find("domain-error") != std::string::npos);

    // no propagating drive
    const auto nodrive = run({"steady", "--gamma", "0", "--xi", "0.2"});
    CHECK(nodrive.status == 3);
    CHECK(nodrive.err.find("no-drive") != std::string::npos);

    // dispersion singular at k = xi = 0
    const auto sing = run({"dispersion", "--xi", "0", "--kmin", "0", "--kmax", "1"});
    CHECK(sing.status == 3);
    CHECK(sing.err.find("singular-input") != std::string::npos);

    // classification refuses complete screening
    const auto unsup = run({"regimes", "--xi", "1", "--gamma", "1.5"});
    CHECK(unsup.status == 3);
    CHECK(unsup.err.find("unsupported-regime") != std::string::npos);

    // degenerate periodicity system (k1 a = 4 pi at these inputs)
    const double gd = std::pow(16.0 / 3.0, 0.25);
    char gbuf[32], Gbuf[32];
    std::snprintf(gbuf, sizeof gbuf, "%.17g", gd);
    std::snprintf(Gbuf, sizeof Gbuf, "%.17g", gd / 4.0);
    const auto degen_lat = run({"lattice", "--gamma", gbuf, "--G", Gbuf, "--bvp"});
    CHECK(degen_lat.status == 3);
    CHECK(degen_lat.err.find("degenerate-lattice") != std::string::npos);
}

TEST_CASE("material config file and output redirection") {
    const std::string dir = "cli_test_tmp";
    std::filesystem::create_directories(dir);
    std::remove((dir + "/out.csv").c_str());
    {
        std::ofstream conf(dir + "/mats.conf");
        conf << "name=Cu\nmu0_eV=7.0\nEp_eV=10.8\n";
    }
    const auto r = run({"material", "--name", "Cu", "--materials", dir + "/mats.conf"});
    REQUIRE(r.status == 0);
    CHECK(parse_csv(r.out).num(0, "mu") == doctest::Approx(7.0 / 21.6).epsilon(1e-12));

    // bare --output filename lands under the environment directory
    setenv("MATTERWAVE_OUTPUT_DIR", dir.c_str(), 1);
    const auto w = run({"dispersion", "--points", "10", "--output", "out.csv"});
    CHECK(w.status == 0);
    CHECK(w.out.empty());
    std::ifstream written(dir + "/out.csv");
    REQUIRE(written.good());
    std::stringstream buf;
    buf << written.rdbuf();
    CHECK(parse_csv(buf.str()).rows.size() == 10);
    unsetenv("MATTERWAVE_OUTPUT_DIR");
}

TEST_CASE("figure presets") {
    const auto fig1a = run({"dispersion", "--preset", "fig1a"});
    REQUIRE(fig1a.status == 0);
    const auto csv = parse_csv(fig1a.out);
    CHECK(csv.rows.size() == 600);
    CHECK(csv.col("E_free") > 0);
    CHECK(fig1a.out.find("# preset = fig1a") != std::string::npos);

    const auto fig2a = run({"sweep", "--preset", "fig2a"});
    REQUIRE(fig2a.status == 0);
    CHECK(parse_csv(fig2a.out).rows.size() == 600);

    const auto fig4b = run({"sweep", "--preset", "fig4b"});
    REQUIRE(fig4b.status == 0);
    CHECK(parse_csv(fig4b.out).col("gamma_res_xi0.5") > 0);

    // presets pin the parameters: explicit flags are rejected
    const auto clash = run({"sweep", "--preset", "fig2a", "--mu", "0.5"});
    CHECK(clash.status == 2);
    const auto unknown = run({"sweep", "--preset", "fig9z"});
    CHECK(unknown.status == 3);

    const auto fig3 = run({"sweep", "--preset", "fig3c-al"});
    REQUIRE(fig3.status == 0);
    CHECK(fig3.out.find("# material = Al") != std::string::npos);

    const auto fig4d = run({"sweep", "--preset", "fig4d-al"});
    REQUIRE(fig4d.status == 0);
}

TEST_CASE("help exits cleanly") {
    const auto h = run({"--help"});
    CHECK(h.status == 0);
    CHECK(h.out.find("dispersion") != std::string::npos);
}

TEST_CASE("numeric cells survive the text round trip exactly") {
    std::mt19937 gen(424242);
    std::uniform_real_distribution<double> mag(-300.0, 300.0);
    for (int i = 0; i < 5000; ++i) {
        const double v = std::copysign(std::exp2(mag(gen)), mag(gen));
        const std::string s = dataset::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(dataset::format_double(0.0) == "0");
    CHECK(std::strtod(dataset::format_double(0.1).c_str(), nullptr) == 0.1);
}
