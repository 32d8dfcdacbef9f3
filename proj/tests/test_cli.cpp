// Drives the subspec binary end to end. The path to the binary arrives in
// the SUBSPEC_BIN environment variable (set by the test harness).

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "test_common.hpp"

namespace fs = std::filesystem;

static const std::string& bin() {
    static std::string path = [] {
        const char* b = std::getenv("SUBSPEC_BIN");
        if (!b || !*b) {
            std::fprintf(stderr, "SUBSPEC_BIN is not set; cannot locate the binary\n");
            std::exit(1);
        }
        return std::string(b);
    }();
    return path;
}

static const fs::path& scratch() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "subspec_cli_scratch";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

static RunResult run(const std::string& args) {
    static int counter = 0;
    fs::path o = scratch() / ("stdout_" + std::to_string(counter) + ".txt");
    fs::path e = scratch() / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    std::string cmd =
        "'" + bin() + "' " + args + " >'" + o.string() + "' 2>'" + e.string() + "'";
    int st = std::system(cmd.c_str());
    RunResult r;
    if (st >= 0 && WIFEXITED(st)) r.code = WEXITSTATUS(st);
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
}

static std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

static std::vector<double> csv_fields(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
    return out;
}

// Looks up entry (m, k) in "m,k,re,im" CSV lines.
static std::complex<double> matrix_entry(const std::vector<std::string>& lines, int m, int k) {
    std::string prefix = std::to_string(m) + "," + std::to_string(k) + ",";
    for (const std::string& ln : lines) {
        if (ln.rfind(prefix, 0) == 0) {
            std::vector<double> f = csv_fields(ln);
            return {f[2], f[3]};
        }
    }
    REQUIRE(false && "matrix entry not found");
    return {};
}

static void test_region_json() {
    RunResult r = run("region");
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j["kind"] == "halfplane");
    REQUIRE(j["params"]["c"].get<double>() == 0.5);
    REQUIRE(j["params"]["open"].get<bool>() == false);

    r = run("region --flow hyp-auto --p 2 --t 1");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    REQUIRE(j["kind"] == "annulus");
    REQUIRE_NEAR(j["params"]["r_in"].get<double>(), std::exp(-0.5), 1e-12);
    REQUIRE_NEAR(j["params"]["r_out"].get<double>(), std::exp(0.5), 1e-12);
    REQUIRE(j["params"]["center"][0].get<double>() == 0.0);

    r = run("region --flow para-auto --t 1");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    REQUIRE(j["kind"] == "circle");
    REQUIRE(j["params"]["radius"].get<double>() == 1.0);

    r = run("region --flow hyp-auto");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    REQUIRE(j["kind"] == "strip");
    REQUIRE(j["params"]["a"].get<double>() == -0.5);
    REQUIRE(j["params"]["b"].get<double>() == 0.5);

    // t = 0 picks the time-zero operator: the identity, spectrum {1}.
    r = run("region --flow affine --t 0");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    REQUIRE(j["kind"] == "disk");
    REQUIRE(j["params"]["radius"].get<double>() == 0.0);
    REQUIRE(j["params"]["center"][0].get<double>() == 1.0);

    // Closed-form output is reproducible byte for byte.
    RunResult a = run("region --flow hyp-auto --t 1");
    RunResult b = run("region --flow hyp-auto --t 1");
    REQUIRE(a.code == 0 && b.code == 0 && a.out == b.out);
}

static void test_region_errors() {
    REQUIRE(run("region --flow moebius").code == 2);
    REQUIRE(run("region --p 0").code == 2);
    REQUIRE(run("nosuchcommand").code == 2);
    REQUIRE(run("").code == 2);
    REQUIRE(run("--help").code == 0);
    // Valid flow name, but no closed-form generator region exists for it.
    RunResult r = run("region --flow elliptic-rot");
    REQUIRE(r.code == 1);
    REQUIRE(!r.err.empty());
}

static void test_region_out() {
    fs::path dir = scratch() / "region_artifacts";
    RunResult r = run("region --flow affine --out '" + dir.string() + "'");
    REQUIRE(r.code == 0);
    REQUIRE(r.err.find("wrote") != std::string::npos);
    nlohmann::json j = nlohmann::json::parse(slurp(dir / "region.json"));
    REQUIRE(j["kind"] == "halfplane");
    std::vector<std::string> csv = lines_of(slurp(dir / "region_boundary.csv"));
    REQUIRE(csv.size() >= 101);
    REQUIRE(csv[0] == "re,im");
    REQUIRE(csv_fields(csv[1]).size() == 2);
}

static void test_pseudospectrum() {
    fs::path dir = scratch() / "ps";
    RunResult r = run("pseudospectrum --N 20 --box -0.5,2.5,-1.5,1.5 --res 12,11 --out '" +
                      dir.string() + "'");
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("operator: averaging") != std::string::npos);
    REQUIRE(r.out.find("wrote") != std::string::npos);

    std::vector<std::string> csv = lines_of(slurp(dir / "pseudospectrum.csv"));
    REQUIRE(csv.size() == 1 + 12 * 11);
    REQUIRE(csv[0] == "re,im,sigma_min");
    std::vector<double> first = csv_fields(csv[1]);
    REQUIRE(first.size() == 3);
    REQUIRE(first[0] == -0.5 && first[1] == -1.5);
    for (std::size_t i = 1; i < csv.size(); ++i) {
        std::vector<double> f = csv_fields(csv[i]);
        REQUIRE(std::isfinite(f[2]) && f[2] >= 0.0);
    }

    std::string svg = slurp(dir / "pseudospectrum.svg");
    REQUIRE(svg.find("<svg") != std::string::npos);

    REQUIRE(run("pseudospectrum --res 500,500").code == 2);
    REQUIRE(run("pseudospectrum --N 5000").code == 2);
    REQUIRE(run("pseudospectrum --box 1,-1,0,1 --res 4,4 --N 8").code == 2);
}

static void test_subordinate() {
    RunResult r = run("subordinate --N 8");
    REQUIRE(r.code == 0);
    std::vector<std::string> csv = lines_of(r.out);
    REQUIRE(csv.size() == 1 + 9 * 9);
    REQUIRE(csv[0] == "m,k,re,im");
    // The unit-rate exponential weight on the affine flow reproduces the
    // transposed averaging matrix: entry (m, k) = 1/(k+1) for m <= k.
    std::complex<double> e05 = matrix_entry(csv, 0, 5);
    REQUIRE_NEAR(e05.real(), 1.0 / 6.0, 1e-10);
    REQUIRE_NEAR(e05.imag(), 0.0, 1e-10);
    REQUIRE_NEAR(matrix_entry(csv, 3, 3).real(), 0.25, 1e-10);
    REQUIRE_NEAR(std::abs(matrix_entry(csv, 5, 0)), 0.0, 1e-15);

    // A unit atom at t = 0 subordinates to the identity.
    r = run("subordinate --measure '{\"atoms\":[[0,1,0]]}' --N 6");
    REQUIRE(r.code == 0);
    csv = lines_of(r.out);
    for (int m = 0; m <= 6; ++m)
        for (int k = 0; k <= 6; ++k) {
            double want = m == k ? 1.0 : 0.0;
            REQUIRE_NEAR(std::abs(matrix_entry(csv, m, k)), want, 1e-12);
        }

    // Too little density decay for the flow's growth: rejected when applied.
    r = run("subordinate --flow hyp-auto --measure "
            "'{\"density\":{\"name\":\"exp\",\"lambda\":[0.6,0]}}'");
    REQUIRE(r.code == 1);
    REQUIRE(!r.err.empty());

    REQUIRE(run("subordinate --measure 'not json'").code == 2);
}

static void test_localradius() {
    RunResult r = run("localradius --N 64 --n-max 12");
    REQUIRE(r.code == 0);
    std::vector<std::string> csv = lines_of(r.out);
    REQUIRE(csv.size() == 1 + 12);
    REQUIRE(csv[0] == "n,r_n");

    // Orbit of the constant function under the truncated averaging matrix,
    // by the same in-place recurrence the library is checked against.
    std::vector<double> y(65, 0.0);
    y[0] = 1.0;
    std::size_t first_decrease = 0;
    double prev_r = 0.0;
    for (std::size_t n = 1; n <= 12; ++n) {
        for (std::size_t k = 0; k < y.size(); ++k) {
            double up = k == 0 ? 0.0 : y[k - 1];
            y[k] = (static_cast<double>(k) * up + y[k]) / static_cast<double>(k + 1);
        }
        double nrm = 0.0;
        for (double v : y) nrm += v * v;
        double r_n = std::pow(std::sqrt(nrm), 1.0 / static_cast<double>(n));
        std::vector<double> f = csv_fields(csv[n]);
        REQUIRE(f[0] == static_cast<double>(n));
        REQUIRE(std::abs(f[1] - r_n) / r_n <= 1e-12);
        if (first_decrease == 0 && n >= 2 && r_n < prev_r) first_decrease = n;
        prev_r = r_n;
    }
    if (first_decrease != 0) {
        REQUIRE(r.err.find("first decreases at n = " + std::to_string(first_decrease)) !=
                std::string::npos);
    }

    REQUIRE(run("localradius --n-max 0").code == 2);
}

static void test_verify() {
    RunResult r = run("verify semiflow-identities");
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j["suite"] == "semiflow-identities");
    REQUIRE(j["overall"] == "pass");
    REQUIRE(!j["checks"].empty());
    for (const auto& c : j["checks"]) {
        std::string st = c["status"].get<std::string>();
        REQUIRE(st == "pass" || st == "skip");
    }

    REQUIRE(run("verify cesaro-transpose --N 64").code == 0);

    r = run("verify bogus-suite");
    REQUIRE(r.code == 2);
    REQUIRE(r.err.find("registered suites") != std::string::npos);

    // The truncation-window checks in this suite fail by design; the exit
    // code must report that honestly.
    r = run("verify radius-formula --flow affine --p 2 --t 1 --N 48");
    REQUIRE(r.code == 1);
    j = nlohmann::json::parse(r.out);
    REQUIRE(j["overall"] == "fail");
}

static void test_config_merge() {
    fs::path cfg1 = scratch() / "cfg1.json";
    {
        std::ofstream out(cfg1);
        out << "{\"res\": [4, 3], \"N\": 8}\n";
    }
    fs::path dir = scratch() / "cfg_run";
    RunResult r = run("pseudospectrum --config '" + cfg1.string() + "' --out '" + dir.string() +
                      "'");
    REQUIRE(r.code == 0);
    REQUIRE(lines_of(slurp(dir / "pseudospectrum.csv")).size() == 1 + 4 * 3);

    // Command-line flags take precedence over config values.
    r = run("pseudospectrum --config '" + cfg1.string() + "' --res 5,2 --out '" + dir.string() +
            "'");
    REQUIRE(r.code == 0);
    REQUIRE(lines_of(slurp(dir / "pseudospectrum.csv")).size() == 1 + 5 * 2);

    fs::path cfg2 = scratch() / "cfg2.json";
    {
        std::ofstream out(cfg2);
        out << "{\"N\": 6000}\n";
    }
    REQUIRE(run("pseudospectrum --config '" + cfg2.string() + "' --res 4,3").code == 2);
    REQUIRE(run("region --config '" + (scratch() / "missing.json").string() + "'").code == 2);
}

int main() {
    test_region_json();
    test_region_errors();
    test_region_out();
    test_pseudospectrum();
    test_subordinate();
    test_localradius();
    test_verify();
    test_config_merge();
    return testkit::finish("test_cli");
}
