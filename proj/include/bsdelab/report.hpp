#pragma once

#include <string>

#include "bsdelab/experiment.hpp"

namespace bsdelab {

std::string report_csv(const ExperimentResult& res);
std::string report_json(const ExperimentResult& res);
std::string report_txt(const ExperimentResult& res);

struct ReportFiles {
    std::string csv_path, json_path, txt_path;
};

/// Write <base>.csv / <base>.json / <base>.txt; byte-deterministic for a
/// fixed seed.  Throws on I/O failure.
ReportFiles emit_report(const ExperimentResult& res, const std::string& base_path);

}  // namespace bsdelab
