#pragma once
// Deterministic, locale-free text output: number formatting, schema-tagged
// CSV builders, and a small file writer.

#include <optional>
#include <string>
#include <vector>

#include "rabi/exceptional.hpp"
#include "rabi/oracle.hpp"
#include "rabi/spectrum.hpp"

namespace rabi {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

const char* parity_name(Parity p);
const char* kind_name(EnergyKind k);
const char* method_name(SpectrumMethod m);

std::string spectrum_csv(const ModelParams& p, const std::vector<SpectrumRow>& rows);
std::string spectrum_json(const ModelParams& p, const std::vector<SpectrumRow>& rows);

struct GscanRow {
    double x{0.0};
    std::optional<double> g_plus;   // absent inside a pole margin
    std::optional<double> g_minus;
};
std::string gscan_csv(const ModelParams& p, const std::vector<GscanRow>& rows);

struct NamedContours {
    std::string set;  // "juddian" | "cplus" | "cminus"
    const ContourSet* contours{nullptr};
};
std::string contours_csv(const std::vector<NamedContours>& sets);

std::string oracle_csv(const ModelParams& p, const OracleSpectrum& s);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rabi
