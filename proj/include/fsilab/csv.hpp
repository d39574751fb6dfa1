#ifndef FSILAB_CSV_HPP
#define FSILAB_CSV_HPP

// Deterministic CSV / gnuplot-table emission. Identical inputs produce
// byte-identical files: 15 significant digits, LF line endings, no timestamps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsilab/schemes.hpp"
#include "fsilab/stability.hpp"

namespace fsilab {

struct CsvDocument {
    std::vector<std::string> comments;          // emitted as '# ...' lines
    std::vector<std::string> columns;           // header row
    std::vector<std::vector<double>> rows;

    void add_comment(std::string text) { comments.push_back(std::move(text)); }
    void add_row(std::vector<double> row) {
        if (row.size() != columns.size())
            throw std::invalid_argument("CsvDocument: row width does not match header");
        rows.push_back(std::move(row));
    }
};

inline std::string format_number(double v) {
    if (std::isnan(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline std::string render_csv(const CsvDocument& doc, char sep = ',') {
    std::ostringstream out;
    for (const auto& c : doc.comments) out << "# " << c << "\n";
    for (std::size_t i = 0; i < doc.columns.size(); ++i)
        out << doc.columns[i] << (i + 1 < doc.columns.size() ? std::string(1, sep) : "");
    out << "\n";
    for (const auto& row : doc.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_number(row[i]) << (i + 1 < row.size() ? std::string(1, sep) : "");
        out << "\n";
    }
    return out.str();
}

// All content is rendered before the file is opened, so a failed validation
// never leaves a partial file behind.
inline void emit_csv(const CsvDocument& doc, const std::string& path) {
    const std::string body = render_csv(doc);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

// Minimal reader for the files emitted above (round-trip checks, tooling).
inline CsvDocument parse_csv(const std::string& path, char sep = ',') {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_csv: cannot open '" + path + "'");
    CsvDocument doc;
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            doc.comments.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, sep)) cells.push_back(cell);
        if (!header_done) {
            doc.columns = cells;
            header_done = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells)
            row.push_back(c == "n/a" ? std::nan("") : std::stod(c));
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

// gnuplot-compatible whitespace table plus a companion script that plots each
// column against the first.
inline void emit_plotdata(const CsvDocument& doc, const std::string& path) {
    if (doc.columns.empty()) throw std::invalid_argument("emit_plotdata: no columns");
    const std::string body = render_csv(doc, ' ');
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_plotdata: cannot open '" + path + "'");
    out << body;
    if (!out) throw std::runtime_error("emit_plotdata: write failed for '" + path + "'");

    const std::string script_path = path + ".gp";
    std::ofstream gp(script_path, std::ios::binary);
    if (!gp) throw std::runtime_error("emit_plotdata: cannot open '" + script_path + "'");
    gp << "set grid\n";
    gp << "set key outside\n";
    gp << "set xlabel '" << doc.columns.front() << "'\n";
    gp << "plot ";
    for (std::size_t c = 1; c < doc.columns.size(); ++c) {
        gp << "'" << path << "' using 1:" << c + 1 << " with lines title '" << doc.columns[c] << "'";
        if (c + 1 < doc.columns.size()) gp << ", \\\n     ";
    }
    gp << "\n";
}

inline CsvDocument time_series_document(const TimeSeries& ts) {
    CsvDocument doc;
    doc.columns = {"t", "eta_mid", "eta_maxmode", "p_mid", "u_mid", "diverged_flag"};
    for (const auto& r : ts.rows)
        doc.rows.push_back({r.t, r.eta_mid, r.eta_maxmode, r.p_mid, r.u_mid, 0.0});
    if (ts.diverged) {
        doc.add_comment("diverged at step " + std::to_string(ts.diverged_step));
        if (!doc.rows.empty()) doc.rows.back().back() = 1.0;
    }
    return doc;
}

inline CsvDocument sweep_document(const std::string& vary, const std::vector<StabilityReport>& reports) {
    CsvDocument doc;
    doc.columns = {vary, "worst_radius", "worst_mode", "stable", "dn_ratio"};
    for (const auto& r : reports)
        doc.rows.push_back({r.varied_value, r.worst_radius, static_cast<double>(r.worst_mode),
                            r.stable ? 1.0 : 0.0, r.dn_ratio});
    return doc;
}

inline CsvDocument convergence_document(const ConvergenceTable& table) {
    CsvDocument doc;
    doc.columns = {"dt",        "err_eta",     "err_u",     "err_p",     "err_eta_l2t", "err_u_l2t",
                   "err_p_l2t", "order_eta",   "order_u",   "order_p",   "diverged"};
    for (const auto& r : table.rows) {
        const double nan = std::nan("");
        doc.rows.push_back({r.dt, r.diverged ? nan : r.err_eta, r.diverged ? nan : r.err_u,
                            r.diverged ? nan : r.err_p, r.diverged ? nan : r.err_eta_l2t,
                            r.diverged ? nan : r.err_u_l2t, r.diverged ? nan : r.err_p_l2t, r.ord_eta,
                            r.ord_u, r.ord_p, r.diverged ? 1.0 : 0.0});
    }
    return doc;
}

} // namespace fsilab

#endif
