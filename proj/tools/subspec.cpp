// subspec: numerical laboratory for averaging, composition, and subordinated
// operators on Hardy spaces of the disc.
//
// Subcommands: region, pseudospectrum, subordinate, localradius, verify.
// Exit codes: 0 success / checks pass, 1 computation or check failure,
// 2 configuration error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "subspec/common.hpp"
#include "subspec/io_svg.hpp"
#include "subspec/matrices.hpp"
#include "subspec/report.hpp"
#include "subspec/semiflows.hpp"
#include "subspec/spectral.hpp"
#include "subspec/subordination.hpp"
#include "subspec/suites.hpp"

namespace {

using namespace subspec;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitConfig = 2;
constexpr int kMaxOrder = 4096;
constexpr std::size_t kMaxRes = 400;

struct CommonOpts {
    std::string flow = "affine";
    double p = 2.0;
    double t = 1.0;
    int N = 0;
    std::string measure_json;
    std::vector<double> box;
    std::vector<std::size_t> res;
    std::size_t n_max = 30;
    std::string out;
    std::string config_path;

    bool flow_given = false;
    bool t_given = false;
    bool measure_given = false;
};

struct OptHandles {
    CLI::Option* flow = nullptr;
    CLI::Option* p = nullptr;
    CLI::Option* t = nullptr;
    CLI::Option* N = nullptr;
    CLI::Option* measure = nullptr;
    CLI::Option* box = nullptr;
    CLI::Option* res = nullptr;
    CLI::Option* n_max = nullptr;
    CLI::Option* out = nullptr;
};

OptHandles add_common_options(CLI::App* cmd, CommonOpts& o) {
    OptHandles h;
    h.flow = cmd->add_option("--flow", o.flow, "semiflow name (affine, hyp-auto, para-auto, "
                                               "elliptic-rot, elliptic-pow)");
    h.p = cmd->add_option("--p", o.p, "Hardy exponent p > 0");
    h.t = cmd->add_option("--t", o.t, "semigroup time t >= 0");
    h.N = cmd->add_option("--N", o.N, "truncation order (<= 4096)");
    h.measure = cmd->add_option("--measure", o.measure_json,
                                "measure as JSON text: {\"atoms\":[[t,re,im],...],"
                                "\"density\":{\"name\":\"exp\",\"lambda\":[re,im]}}");
    h.box = cmd->add_option("--box", o.box, "grid box x0,x1,y0,y1")->delimiter(',')->expected(4);
    h.res = cmd->add_option("--res", o.res, "grid resolution nx,ny (each <= 400)")
                ->delimiter(',')
                ->expected(2);
    h.n_max = cmd->add_option("--n-max", o.n_max, "number of orbit powers to trace");
    h.out = cmd->add_option("--out", o.out, "output directory for artifact files");
    cmd->add_option("--config", o.config_path, "JSON file with the same keys as the flags");
    return h;
}

// --config file supplies values for flags not given on the command line.
void merge_config(const OptHandles& h, CommonOpts& o) {
    if (o.config_path.empty()) {
        o.flow_given = h.flow->count() > 0;
        o.t_given = h.t->count() > 0;
        o.measure_given = h.measure->count() > 0;
        return;
    }
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + o.config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("config file is not valid JSON: " + std::string(e.what()));
    }
    auto want = [&](const char* key, const CLI::Option* opt) {
        return opt->count() == 0 && j.contains(key);
    };
    if (want("flow", h.flow)) o.flow = j["flow"].get<std::string>();
    if (want("p", h.p)) o.p = j["p"].get<double>();
    if (want("t", h.t)) o.t = j["t"].get<double>();
    if (want("N", h.N)) o.N = j["N"].get<int>();
    if (want("measure", h.measure)) o.measure_json = j["measure"].dump();
    if (want("box", h.box)) o.box = j["box"].get<std::vector<double>>();
    if (want("res", h.res)) o.res = j["res"].get<std::vector<std::size_t>>();
    if (want("n_max", h.n_max)) o.n_max = j["n_max"].get<std::size_t>();
    if (want("out", h.out)) o.out = j["out"].get<std::string>();
    o.flow_given = h.flow->count() > 0 || j.contains("flow");
    o.t_given = h.t->count() > 0 || j.contains("t");
    o.measure_given = h.measure->count() > 0 || j.contains("measure");
}

void validate_common(const CommonOpts& o, int default_N) {
    int N = o.N > 0 ? o.N : default_N;
    if (N < 1 || N > kMaxOrder)
        throw std::invalid_argument("truncation order must be in [1, 4096], got " +
                                    std::to_string(N));
    if (!(o.p > 0.0)) throw std::invalid_argument("p must be positive");
    if (o.t < 0.0) throw std::invalid_argument("t must be >= 0");
    if (!o.res.empty() && (o.res[0] < 1 || o.res[0] > kMaxRes || o.res[1] < 1 ||
                           o.res[1] > kMaxRes))
        throw std::invalid_argument("grid resolution must be in [1, 400] per axis");
    if (!o.box.empty() && !(o.box[0] < o.box[1] && o.box[2] < o.box[3]))
        throw std::invalid_argument("grid box must satisfy x0 < x1 and y0 < y1");
    flow_by_name(o.flow);  // rejects unknown names
}

void write_artifact(std::vector<std::string>& written, const std::string& dir,
                    const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::string path = (std::filesystem::path(dir) / name).string();
    write_text_file(path, content);
    written.push_back(path);
}

// Operator selection shared by pseudospectrum and localradius: the default is
// the averaging matrix; --flow with --t picks the composition compression at
// time t (a unit atom); --measure picks the subordinated matrix.
OperatorMatrix build_operator(const CommonOpts& o, int N, std::string& label) {
    if (o.measure_given) {
        Semiflow flow = flow_by_name(o.flow);
        BorelMeasure nu = measure_from_json_text(o.measure_json);
        require_admissible(flow, nu);
        label = "subordinated " + o.flow;
        return subordinate_matrix(flow, nu, N, make_bochner_plan(flow, nu, N, 1e-12));
    }
    if (o.flow_given) {
        Semiflow flow = flow_by_name(o.flow);
        BorelMeasure nu = atom_measure({{o.t, cplx(1.0, 0.0)}});
        label = o.flow + " composition at t = " + fmt_g17(o.t);
        return subordinate_matrix(flow, nu, N, make_bochner_plan(flow, nu, N, 1e-12));
    }
    label = "averaging";
    return cesaro_matrix(N);
}

// Closed-form spectrum overlay for the SVG, when one applies.
std::optional<SpectralRegion> overlay_region(const CommonOpts& o) {
    try {
        if (o.measure_given) {
            BorelMeasure nu = measure_from_json_text(o.measure_json);
            if (nu.density_name == "exp" && nu.atoms.empty() && nu.density_lambda.imag() == 0.0) {
                Semiflow flow = flow_by_name(o.flow);
                SpectralRegion gen = generator_spectrum_region(flow, o.p);
                return map_region_resolvent(gen, nu.density_lambda);
            }
            return std::nullopt;
        }
        if (o.flow_given) return semigroup_spectrum_region(flow_by_name(o.flow), o.p, o.t);
        SpectralRegion disk;
        disk.kind = RegionKind::disk;
        disk.center = cplx(1.0, 0.0);
        disk.radius = 1.0;
        disk.label = "closed unit-shifted disk";
        return disk;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

std::vector<std::vector<cplx>> overlay_polylines(const SpectralRegion& r) {
    std::vector<std::vector<cplx>> out;
    if (r.kind == RegionKind::disk || r.kind == RegionKind::circle) {
        out.push_back(region_boundary_sample(r, 256));
    } else if (r.kind == RegionKind::annulus) {
        std::vector<cplx> all = region_boundary_sample(r, 256);
        std::size_t half = all.size() / 2;
        out.emplace_back(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(half));
        out.emplace_back(all.begin() + static_cast<std::ptrdiff_t>(half), all.end());
    }
    return out;
}

int cmd_region(const CommonOpts& o) {
    Semiflow flow = flow_by_name(o.flow);
    SpectralRegion region =
        o.t_given ? semigroup_spectrum_region(flow, o.p, o.t) : generator_spectrum_region(flow, o.p);
    std::string json_text = region_json(region).dump(2) + "\n";
    std::fputs(json_text.c_str(), stdout);
    if (!o.out.empty()) {
        std::vector<std::string> written;
        write_artifact(written, o.out, "region.json", json_text);
        write_artifact(written, o.out, "region_boundary.csv",
                       points_csv(region_boundary_sample(region, 512)));
        for (const auto& p : written) std::fprintf(stderr, "wrote %s\n", p.c_str());
    }
    return kExitOk;
}

int cmd_pseudospectrum(const CommonOpts& o) {
    const int N = o.N > 0 ? o.N : 100;
    std::vector<double> box = o.box.empty() ? std::vector<double>{-0.5, 2.5, -1.5, 1.5} : o.box;
    std::vector<std::size_t> res = o.res.empty() ? std::vector<std::size_t>{200, 200} : o.res;

    std::string label;
    OperatorMatrix a = build_operator(o, N, label);
    PseudospectrumGrid grid =
        pseudospectrum_grid(a, box[0], box[1], box[2], box[3], res[0], res[1]);

    SvgOptions svg_opts;
    if (auto reg = overlay_region(o)) svg_opts.overlays = overlay_polylines(*reg);
    std::string svg = pseudospectrum_svg(grid, svg_opts);

    std::string dir = o.out.empty() ? std::string(".") : o.out;
    std::vector<std::string> written;
    write_artifact(written, dir, "pseudospectrum.csv", grid_csv(grid));
    write_artifact(written, dir, "pseudospectrum.svg", svg);
    std::printf("operator: %s, order %d\n", label.c_str(), N);
    std::printf("grid: %zu x %zu over [%s, %s] x [%s, %s], %zu rows\n", res[0], res[1],
                fmt_g17(box[0]).c_str(), fmt_g17(box[1]).c_str(), fmt_g17(box[2]).c_str(),
                fmt_g17(box[3]).c_str(), grid.values.size());
    for (const auto& p : written) std::printf("wrote %s\n", p.c_str());
    return kExitOk;
}

int cmd_subordinate(const CommonOpts& o) {
    const int N = o.N > 0 ? o.N : 8;
    Semiflow flow = flow_by_name(o.flow);
    BorelMeasure nu = o.measure_given
                          ? measure_from_json_text(o.measure_json)
                          : exp_density_measure(cplx(1.0, 0.0));
    require_admissible(flow, nu);
    OperatorMatrix m = subordinate_matrix(flow, nu, N, make_bochner_plan(flow, nu, N, 1e-12));
    std::string csv = matrix_csv(m);
    std::fputs(csv.c_str(), stdout);
    if (!o.out.empty()) {
        std::vector<std::string> written;
        write_artifact(written, o.out, "matrix.csv", csv);
        for (const auto& p : written) std::fprintf(stderr, "wrote %s\n", p.c_str());
    }
    return kExitOk;
}

int cmd_localradius(const CommonOpts& o) {
    const int N = o.N > 0 ? o.N : 1024;
    std::string label;
    OperatorMatrix a = build_operator(o, N, label);
    CoeffVector e0(static_cast<std::size_t>(N) + 1, cplx(0.0, 0.0));
    e0[0] = cplx(1.0, 0.0);
    LocalRadiusTrace tr = local_radius_trace(a, e0, o.n_max, 1);
    std::string csv = trace_csv(tr);
    std::fputs(csv.c_str(), stdout);
    if (tr.first_decrease != 0)
        std::fprintf(stderr, "note: trace first decreases at n = %zu\n", tr.first_decrease);
    if (!tr.note.empty()) std::fprintf(stderr, "note: %s\n", tr.note.c_str());
    if (!o.out.empty()) {
        std::vector<std::string> written;
        write_artifact(written, o.out, "trace.csv", csv);
        for (const auto& p : written) std::fprintf(stderr, "wrote %s\n", p.c_str());
    }
    return kExitOk;
}

int cmd_verify(const CommonOpts& o, const std::string& suite) {
    SuiteConfig scfg;
    scfg.flow = o.flow;
    scfg.p = o.p;
    scfg.t = o.t;
    scfg.N = o.N;
    scfg.out_dir = o.out;
    SuiteReport rep = run_suite(suite, scfg);
    std::fputs(suite_report_text(rep).c_str(), stdout);
    if (!o.out.empty()) {
        std::vector<std::string> written;
        write_artifact(written, o.out, "report_" + suite + ".json",
                       suite_report_json(rep).dump(2) + "\n");
        for (const auto& p : written) std::fprintf(stderr, "wrote %s\n", p.c_str());
    }
    return rep.overall_pass() ? kExitOk : kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for averaging, composition, and subordinated operators "
                 "on Hardy spaces of the disc"};
    app.require_subcommand(1);

    CommonOpts region_o, pseudo_o, subord_o, radius_o, verify_o;
    std::string suite_name;

    CLI::App* region = app.add_subcommand("region", "closed-form spectral region as JSON");
    OptHandles region_h = add_common_options(region, region_o);
    CLI::App* pseudo = app.add_subcommand("pseudospectrum", "sigma_min grid as CSV plus an SVG "
                                                            "contour sketch");
    OptHandles pseudo_h = add_common_options(pseudo, pseudo_o);
    CLI::App* subord = app.add_subcommand("subordinate", "subordinated operator matrix as CSV");
    OptHandles subord_h = add_common_options(subord, subord_o);
    CLI::App* radius = app.add_subcommand("localradius", "orbit radius trace as CSV");
    OptHandles radius_h = add_common_options(radius, radius_o);
    CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
    verify->add_option("suite", suite_name, "suite name")->required();
    OptHandles verify_h = add_common_options(verify, verify_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitConfig;
    }

    // Configuration stage: merge --config, check ranges, resolve names.
    CommonOpts* active = nullptr;
    try {
        if (region->parsed()) {
            merge_config(region_h, region_o);
            validate_common(region_o, 1);
            active = &region_o;
        } else if (pseudo->parsed()) {
            merge_config(pseudo_h, pseudo_o);
            validate_common(pseudo_o, 100);
            active = &pseudo_o;
        } else if (subord->parsed()) {
            merge_config(subord_h, subord_o);
            validate_common(subord_o, 8);
            active = &subord_o;
        } else if (radius->parsed()) {
            merge_config(radius_h, radius_o);
            validate_common(radius_o, 1024);
            if (radius_o.n_max < 1)
                throw std::invalid_argument("n-max must be at least 1");
            active = &radius_o;
        } else if (verify->parsed()) {
            merge_config(verify_h, verify_o);
            validate_common(verify_o, 1);
            if (!is_registered_suite(suite_name)) {
                std::string all;
                for (const auto& s : registered_suites()) all += (all.empty() ? "" : ", ") + s;
                throw std::invalid_argument("unknown suite '" + suite_name +
                                            "'; registered suites: " + all);
            }
            active = &verify_o;
        }
        if (active && !active->measure_json.empty())
            measure_from_json_text(active->measure_json);  // syntax check up front
    } catch (const std::exception& e) {
        std::fprintf(stderr, "subspec: configuration error: %s\n", e.what());
        return kExitConfig;
    }

    // Computation stage.
    try {
        if (region->parsed()) return cmd_region(region_o);
        if (pseudo->parsed()) return cmd_pseudospectrum(pseudo_o);
        if (subord->parsed()) return cmd_subordinate(subord_o);
        if (radius->parsed()) return cmd_localradius(radius_o);
        if (verify->parsed()) return cmd_verify(verify_o, suite_name);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "subspec: %s\n", e.what());
        return kExitComputation;
    }
    return kExitConfig;
}
