#include "subspec/report.hpp"

#include <fstream>
#include <stdexcept>

namespace subspec {

bool SuiteReport::overall_pass() const {
    for (const CheckRecord& c : checks)
        if (c.status == "fail") return false;
    return true;
}

nlohmann::json suite_report_json(const SuiteReport& rep) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckRecord& c : rep.checks) {
        nlohmann::json j;
        j["name"] = c.name;
        j["status"] = c.status;
        j["measured"] = c.measured ? nlohmann::json(*c.measured) : nlohmann::json(nullptr);
        j["tolerance"] = c.tolerance ? nlohmann::json(*c.tolerance) : nlohmann::json(nullptr);
        j["runtime_seconds"] = c.runtime_seconds;
        j["detail"] = c.detail;
        checks.push_back(j);
    }
    nlohmann::json out;
    out["suite"] = rep.suite;
    out["overall"] = rep.overall_pass() ? "pass" : "fail";
    out["checks"] = checks;
    out["artifacts"] = rep.artifacts;
    return out;
}

std::string suite_report_text(const SuiteReport& rep) { return suite_report_json(rep).dump(2) + "\n"; }

namespace {

nlohmann::json cplx_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

nlohmann::json region_json(const SpectralRegion& r) {
    nlohmann::json out;
    if (r.kind == RegionKind::cloud) {
        out["kind"] = "cloud";
        nlohmann::json pts = nlohmann::json::array();
        for (cplx p : r.points) pts.push_back(cplx_json(p));
        out["points"] = pts;
        out["resolution"] = r.resolution;
        return out;
    }
    nlohmann::json params;
    if (!r.label.empty()) params["label"] = r.label;
    switch (r.kind) {
        case RegionKind::halfplane:
            out["kind"] = "halfplane";
            params["c"] = r.c;
            params["open"] = r.open;
            break;
        case RegionKind::strip:
            out["kind"] = "strip";
            params["a"] = r.a;
            params["b"] = r.b;
            params["open_lo"] = r.open_lo;
            params["open_hi"] = r.open_hi;
            break;
        case RegionKind::disk:
            out["kind"] = "disk";
            params["center"] = cplx_json(r.center);
            params["radius"] = r.radius;
            break;
        case RegionKind::circle:
            out["kind"] = "circle";
            params["center"] = cplx_json(r.center);
            params["radius"] = r.radius;
            break;
        case RegionKind::annulus:
            out["kind"] = "annulus";
            params["center"] = cplx_json(r.center);
            params["r_in"] = r.r_in;
            params["r_out"] = r.r_out;
            break;
        case RegionKind::mapped:
            out["kind"] = "mapped";
            params["map"] = r.map_tag;
            params["lambda"] = cplx_json(r.map_lambda);
            if (r.base) params["base"] = region_json(*r.base);
            break;
        case RegionKind::cloud:
            break;  // handled above
    }
    out["params"] = params;
    return out;
}

std::string grid_csv(const PseudospectrumGrid& g) {
    std::string out = "re,im,sigma_min\n";
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            out += fmt_g17(g.x_at(ix));
            out += ',';
            out += fmt_g17(g.y_at(iy));
            out += ',';
            out += fmt_g17(g.values[iy * g.nx + ix]);
            out += '\n';
        }
    }
    return out;
}

std::string matrix_csv(const OperatorMatrix& m) {
    std::string out = "m,k,re,im\n";
    for (Eigen::Index row = 0; row < m.entries.rows(); ++row) {
        for (Eigen::Index col = 0; col < m.entries.cols(); ++col) {
            out += std::to_string(row);
            out += ',';
            out += std::to_string(col);
            out += ',';
            out += fmt_g17(m.entries(row, col).real());
            out += ',';
            out += fmt_g17(m.entries(row, col).imag());
            out += '\n';
        }
    }
    return out;
}

std::string trace_csv(const LocalRadiusTrace& tr) {
    std::string out = "n,r_n\n";
    for (std::size_t i = 0; i < tr.r.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += fmt_g17(tr.r[i]);
        out += '\n';
    }
    return out;
}

std::string points_csv(const std::vector<cplx>& pts) {
    std::string out = "re,im\n";
    for (cplx p : pts) {
        out += fmt_g17(p.real());
        out += ',';
        out += fmt_g17(p.imag());
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace subspec
