#pragma once

// Serialization of colorings.
//
// Matrix text format:
//     <n> <ell>
//     n lines of n space-separated integers (diagonal 0, symmetric, 1..ell)
//
// JSON certificate: {"n", "ell", "q" (optional), "matrix", "meta"}.

#include "core.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace rainbow {

enum class FileFormat { matrix, json };

struct CertificateFile {
    EdgeColoring coloring;
    std::optional<std::size_t> q;
    nlohmann::json meta = nlohmann::json::object();
};

inline FileFormat format_for_path(std::string_view path)
{
    constexpr std::string_view ext = ".json";
    if (path.size() >= ext.size() && path.substr(path.size() - ext.size()) == ext)
        return FileFormat::json;
    return FileFormat::matrix;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    out << content;
    if (!out)
        throw Error(ErrorKind::IoError, "failed writing '" + path + "'");
}

namespace detail {

// Rethrows validation failures as ParseError, keeping the original kind in the message.
template <typename F>
auto as_parse_error(F&& f)
{
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParseError)
            throw;
        throw Error(ErrorKind::ParseError, e.what());
    }
}

inline std::vector<long long> parse_ints(const std::string& line, std::size_t line_no)
{
    std::istringstream in(line);
    std::vector<long long> values;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size())
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": '" + token + "' is not an integer");
        values.push_back(v);
    }
    return values;
}

} // namespace detail

inline EdgeColoring parse_matrix(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::vector<long long>> lines;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": CR line endings are not accepted");
        auto values = detail::parse_ints(line, line_no);
        if (values.empty()) {
            if (lines.empty())
                throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected '<n> <ell>'");
            continue;
        }
        lines.push_back(std::move(values));
    }
    if (lines.empty() || lines[0].size() != 2 || lines[0][0] < 1 || lines[0][1] < 1)
        throw Error(ErrorKind::ParseError, "header must be '<n> <ell>' with positive integers");
    const auto n = static_cast<std::size_t>(lines[0][0]);
    const auto ell = static_cast<std::size_t>(lines[0][1]);
    if (lines.size() - 1 != n)
        throw Error(ErrorKind::ParseError, "expected " + std::to_string(n) + " matrix rows, found "
                                               + std::to_string(lines.size() - 1));
    EdgeColoring::Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (lines[i + 1].size() != n)
            throw Error(ErrorKind::ParseError, "matrix row " + std::to_string(i + 1) + " has "
                                                   + std::to_string(lines[i + 1].size()) + " entries, expected "
                                                   + std::to_string(n));
        m[i].reserve(n);
        for (auto v : lines[i + 1]) {
            if (v < 0 || v > static_cast<long long>(kMaxCoreColors))
                throw Error(ErrorKind::ParseError, "matrix row " + std::to_string(i + 1) + ": entry " + std::to_string(v)
                                                       + " out of range");
            m[i].push_back(static_cast<int>(v));
        }
    }
    return detail::as_parse_error([&] { return EdgeColoring::from_matrix(n, ell, m); });
}

inline std::string format_matrix(const EdgeColoring& coloring)
{
    std::string out = std::to_string(coloring.n()) + " " + std::to_string(coloring.ell()) + "\n";
    out.reserve(out.size() + coloring.n() * coloring.n() * 3);
    for (std::size_t i = 0; i < coloring.n(); ++i) {
        const auto row = coloring.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j)
                out += ' ';
            out += std::to_string(row[j]);
        }
        out += '\n';
    }
    return out;
}

inline CertificateFile parse_certificate_json(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
    auto fail = [](const std::string& why) -> Error { return Error(ErrorKind::ParseError, why); };
    if (!doc.is_object())
        throw fail("certificate must be a JSON object");
    for (const char* key : {"n", "ell", "matrix"})
        if (!doc.contains(key))
            throw fail(std::string("missing key '") + key + "'");
    if (!doc["n"].is_number_unsigned() || !doc["ell"].is_number_unsigned())
        throw fail("'n' and 'ell' must be non-negative integers");
    const auto n = doc["n"].get<std::size_t>();
    const auto ell = doc["ell"].get<std::size_t>();
    const auto& rows = doc["matrix"];
    if (!rows.is_array())
        throw fail("'matrix' must be an array of rows");
    EdgeColoring::Matrix m;
    for (const auto& row : rows) {
        if (!row.is_array())
            throw fail("'matrix' must be an array of rows");
        std::vector<int> r;
        for (const auto& x : row) {
            if (!x.is_number_integer())
                throw fail("matrix entries must be integers");
            const auto v = x.get<long long>();
            if (v < 0 || v > static_cast<long long>(kMaxCoreColors))
                throw fail("matrix entry " + std::to_string(v) + " out of range");
            r.push_back(static_cast<int>(v));
        }
        m.push_back(std::move(r));
    }
    CertificateFile file{detail::as_parse_error([&] { return EdgeColoring::from_matrix(n, ell, m); }), std::nullopt};
    if (doc.contains("q")) {
        if (!doc["q"].is_number_unsigned())
            throw fail("'q' must be a non-negative integer");
        file.q = doc["q"].get<std::size_t>();
    }
    if (doc.contains("meta"))
        file.meta = doc["meta"];
    return file;
}

/// One matrix row per line so that certificates diff cleanly.
inline std::string format_certificate_json(const CertificateFile& file)
{
    const auto& c = file.coloring;
    std::string out = "{\n  \"n\": " + std::to_string(c.n()) + ",\n  \"ell\": " + std::to_string(c.ell()) + ",\n";
    if (file.q)
        out += "  \"q\": " + std::to_string(*file.q) + ",\n";
    out += "  \"matrix\": [\n";
    for (std::size_t i = 0; i < c.n(); ++i) {
        out += "    [";
        const auto row = c.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j)
                out += ", ";
            out += std::to_string(row[j]);
        }
        out += i + 1 < c.n() ? "],\n" : "]\n";
    }
    out += "  ],\n  \"meta\": " + file.meta.dump() + "\n}\n";
    return out;
}

inline CertificateFile load_certificate(const std::string& path)
{
    const std::string text = read_file(path);
    if (format_for_path(path) == FileFormat::json)
        return parse_certificate_json(text);
    return CertificateFile{parse_matrix(text), std::nullopt};
}

inline std::string format_certificate(const CertificateFile& file, FileFormat format)
{
    return format == FileFormat::json ? format_certificate_json(file) : format_matrix(file.coloring);
}

// Colors 1..6 follow the drawing of the K_13 certificate: red, blue, green,
// brown, gray, yellow.  Every name is valid in both Graphviz and xcolor.
inline constexpr std::array<std::string_view, 12> kPalette{
    "red", "blue", "green", "brown", "gray", "yellow", "orange", "purple", "cyan", "magenta", "pink", "violet",
};

namespace detail {

inline void check_palette(const EdgeColoring& coloring)
{
    if (coloring.ell() > kPalette.size())
        throw Error(ErrorKind::PaletteExhausted, std::to_string(coloring.ell()) + " colors; the palette has "
                                                     + std::to_string(kPalette.size()));
}

inline std::string fixed4(double x)
{
    if (std::fabs(x) < 5e-5)
        x = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

// Vertex i (1-based) sits clockwise from the top.
inline double vertex_angle_deg(std::size_t i, std::size_t n)
{
    return 90.0 - 360.0 * static_cast<double>(i - 1) / static_cast<double>(n);
}

inline constexpr double kPi = 3.14159265358979323846;

inline std::pair<std::string, std::string> vertex_position(std::size_t i, std::size_t n, double radius)
{
    const double a = vertex_angle_deg(i, n) * kPi / 180.0;
    return {fixed4(radius * std::cos(a)), fixed4(radius * std::sin(a))};
}

} // namespace detail

inline std::string export_dot(const EdgeColoring& coloring)
{
    detail::check_palette(coloring);
    const std::size_t n = coloring.n();
    std::string out = "graph coloring {\n  graph [layout=neato];\n  node [shape=circle, width=0.3, fixedsize=true];\n";
    for (std::size_t i = 1; i <= n; ++i) {
        const auto [x, y] = detail::vertex_position(i, n, 2.5);
        out += "  " + std::to_string(i) + " [pos=\"" + x + "," + y + "!\"];\n";
    }
    for (std::size_t u = 1; u <= n; ++u)
        for (std::size_t v = u + 1; v <= n; ++v)
            out += "  " + std::to_string(u) + " -- " + std::to_string(v) + " [color=\""
                   + std::string(kPalette[coloring.at(u - 1, v - 1) - 1]) + "\"];\n";
    out += "}\n";
    return out;
}

/// Standalone LaTeX document; edges are grouped by color class.
inline std::string export_tikz(const EdgeColoring& coloring)
{
    detail::check_palette(coloring);
    const std::size_t n = coloring.n();
    std::string out = "\\documentclass[tikz,border=2mm]{standalone}\n"
                      "\\begin{document}\n"
                      "\\begin{tikzpicture}[scale=1.2, vtx/.style={circle, fill=black, inner sep=1.5pt}]\n";
    for (std::size_t i = 1; i <= n; ++i) {
        const auto [x, y] = detail::vertex_position(i, n, 2.5);
        out += "\\coordinate (v" + std::to_string(i) + ") at (" + x + "," + y + ");\n";
    }
    for (std::size_t c = 1; c <= coloring.ell(); ++c) {
        out += "% color " + std::to_string(c) + "\n";
        for (std::size_t u = 1; u <= n; ++u)
            for (std::size_t v = u + 1; v <= n; ++v)
                if (coloring.at(u - 1, v - 1) == c)
                    out += "\\draw[color=" + std::string(kPalette[c - 1]) + "] (v" + std::to_string(u) + ") -- (v"
                           + std::to_string(v) + ");\n";
    }
    for (std::size_t i = 1; i <= n; ++i)
        out += "\\node[vtx, label={" + detail::fixed4(detail::vertex_angle_deg(i, n)) + ":" + std::to_string(i)
               + "}] at (v" + std::to_string(i) + ") {};\n";
    out += "\\end{tikzpicture}\n\\end{document}\n";
    return out;
}

} // namespace rainbow
