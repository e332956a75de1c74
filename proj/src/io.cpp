#include "rabi/io.hpp"

#include <charconv>
#include <cstddef>
#include <fstream>
#include <json.hpp>

#include "rabi/errors.hpp"

namespace rabi {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const char* parity_name(Parity p) {
    switch (p) {
        case Parity::Plus: return "plus";
        case Parity::Minus: return "minus";
        default: return "unassigned";
    }
}

const char* kind_name(EnergyKind k) {
    switch (k) {
        case EnergyKind::Regular: return "regular";
        case EnergyKind::JuddianDegenerate: return "juddian_degenerate";
        default: return "exceptional_nondegenerate";
    }
}

const char* method_name(SpectrumMethod m) {
    return m == SpectrumMethod::GFunction ? "gfunction" : "oracle";
}

namespace {

std::string params_comment(const ModelParams& p) {
    return "# omega=" + format_double(p.omega) + " g=" + format_double(p.g) +
           " delta=" + format_double(p.delta) + "\n";
}

}  // namespace

std::string spectrum_csv(const ModelParams& p, const std::vector<SpectrumRow>& rows) {
    std::string out = "# schema=1\n" + params_comment(p);
    out += "index,energy,parity,kind,method,residual\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SpectrumRow& r = rows[i];
        out += std::to_string(i) + ',' + format_double(r.energy.value) + ',' +
               parity_name(r.energy.parity) + ',' + kind_name(r.energy.kind) + ',' +
               method_name(r.method) + ',' + format_double(r.residual) + '\n';
    }
    return out;
}

std::string spectrum_json(const ModelParams& p, const std::vector<SpectrumRow>& rows) {
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["params"] = {{"omega", p.omega}, {"g", p.g}, {"delta", p.delta}};
    doc["rows"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SpectrumRow& r = rows[i];
        doc["rows"].push_back({{"index", i},
                               {"energy", r.energy.value},
                               {"parity", parity_name(r.energy.parity)},
                               {"kind", kind_name(r.energy.kind)},
                               {"method", method_name(r.method)},
                               {"residual", r.residual}});
    }
    return doc.dump(2) + "\n";
}

std::string gscan_csv(const ModelParams& p, const std::vector<GscanRow>& rows) {
    std::string out = "# schema=1\n" + params_comment(p);
    out += "x,g_plus,g_minus\n";
    for (const GscanRow& r : rows) {
        out += format_double(r.x);
        out += ',';
        if (r.g_plus) out += format_double(*r.g_plus);
        out += ',';
        if (r.g_minus) out += format_double(*r.g_minus);
        out += '\n';
    }
    return out;
}

std::string contours_csv(const std::vector<NamedContours>& sets) {
    std::string out = "# schema=1\n";
    out += "level,set,component,closed,vertex,delta,g\n";
    for (const NamedContours& nc : sets) {
        const ContourSet& cs = *nc.contours;
        for (std::size_t c = 0; c < cs.polylines.size(); ++c)
            for (std::size_t v = 0; v < cs.polylines[c].size(); ++v)
                out += std::to_string(cs.level_index) + ',' + nc.set + ',' + std::to_string(c) +
                       ',' + (cs.closed_flags[c] ? "1" : "0") + ',' + std::to_string(v) + ',' +
                       format_double(cs.polylines[c][v].delta) + ',' +
                       format_double(cs.polylines[c][v].g) + '\n';
    }
    return out;
}

std::string oracle_csv(const ModelParams& p, const OracleSpectrum& s) {
    std::string out = "# schema=1\n" + params_comment(p);
    out += "# m_max=" + std::to_string(s.m_max) +
           " convergence_delta=" + format_double(s.convergence_delta) + "\n";
    out += "index,energy,parity\n";
    for (std::size_t i = 0; i < s.energies.size(); ++i)
        out += std::to_string(i) + ',' + format_double(s.energies[i]) + ',' +
               parity_name(s.parities[i]) + '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SolverError("cannot open output file: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw SolverError("short write to output file: " + path);
}

}  // namespace rabi
