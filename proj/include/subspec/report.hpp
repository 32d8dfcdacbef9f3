#pragma once

// Check records and suite reports with stable JSON serialization, plus the
// CSV/JSON writers shared by the command-line tools.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subspec/common.hpp"
#include "subspec/matrices.hpp"
#include "subspec/spectral.hpp"

namespace subspec {

struct CheckRecord {
    std::string name;
    std::string status;  // "pass" | "fail" | "skip"
    std::optional<double> measured;
    std::optional<double> tolerance;
    double runtime_seconds = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckRecord> checks;
    std::vector<std::string> artifacts;

    // Pass iff every non-skipped check passes.
    bool overall_pass() const;
};

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

// JSON with sorted keys (nlohmann's default object ordering), so serialized
// reports are byte-stable across runs of the same build.
nlohmann::json suite_report_json(const SuiteReport& rep);
std::string suite_report_text(const SuiteReport& rep);

// {"kind": ..., "params": {...}}; point clouds serialize as
// {"kind":"cloud","points":[[re,im],...],"resolution":h}.
nlohmann::json region_json(const SpectralRegion& r);

// CSV writers; all floats use 17 significant digits.
std::string grid_csv(const PseudospectrumGrid& g);             // re,im,sigma_min
std::string matrix_csv(const OperatorMatrix& m);               // m,k,re,im
std::string trace_csv(const LocalRadiusTrace& tr);             // n,r_n
std::string points_csv(const std::vector<cplx>& pts);          // re,im

void write_text_file(const std::string& path, const std::string& content);

}  // namespace subspec
