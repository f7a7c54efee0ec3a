#pragma once

// Edge-colorings of complete graphs.
//
// Vertices are 1-based and colors are 1..ell on every public entry point;
// the diagonal of the square matrix form is the sentinel 0.  Internally the
// coloring is a dense row-major n*n table addressed 0-based through at().

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rainbow {

using Color = std::uint8_t;

inline constexpr std::size_t kMaxCoreColors = 255;

enum class ErrorKind {
    AsymmetricMatrix,
    ColorOutOfRange,
    BadDiagonal,
    ShapeMismatch,
    SelfLoop,
    VertexOutOfRange,
    ColorCountMismatch,
    SizeOverflow,
    QTooLarge,
    QTooSmall,
    TooManyColors,
    PatternTooLarge,
    PatternInvalid,
    InvalidConfig,
    ParseError,
    UnknownCertificate,
    PaletteExhausted,
    IoError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorKind::ColorOutOfRange: return "ColorOutOfRange";
    case ErrorKind::BadDiagonal: return "BadDiagonal";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorKind::ColorCountMismatch: return "ColorCountMismatch";
    case ErrorKind::SizeOverflow: return "SizeOverflow";
    case ErrorKind::QTooLarge: return "QTooLarge";
    case ErrorKind::QTooSmall: return "QTooSmall";
    case ErrorKind::TooManyColors: return "TooManyColors";
    case ErrorKind::PatternTooLarge: return "PatternTooLarge";
    case ErrorKind::PatternInvalid: return "PatternInvalid";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownCertificate: return "UnknownCertificate";
    case ErrorKind::PaletteExhausted: return "PaletteExhausted";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// A total, symmetric assignment of colors 1..ell to the edges of K_n.
///
/// Immutable once constructed; every constructor validates and rejects
/// malformed input instead of repairing it.
class EdgeColoring {
public:
    using Matrix = std::vector<std::vector<int>>;

    /// Validates an n*n integer matrix (diagonal 0, symmetric, off-diagonal in 1..ell).
    static EdgeColoring from_matrix(std::size_t n, std::size_t ell, const Matrix& entries)
    {
        if (entries.size() != n)
            throw Error(ErrorKind::ShapeMismatch,
                        "expected " + std::to_string(n) + " rows, got " + std::to_string(entries.size()));
        std::vector<Color> cells(n * n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (entries[i].size() != n)
                throw Error(ErrorKind::ShapeMismatch, "row " + std::to_string(i + 1) + " has "
                                                          + std::to_string(entries[i].size()) + " entries, expected "
                                                          + std::to_string(n));
            for (std::size_t j = 0; j < n; ++j) {
                const int value = entries[i][j];
                if (value < 0 || static_cast<std::size_t>(value) > kMaxCoreColors)
                    throw Error(i == j ? ErrorKind::BadDiagonal : ErrorKind::ColorOutOfRange,
                                entry_name(i, j) + " = " + std::to_string(value));
                cells[i * n + j] = static_cast<Color>(value);
            }
        }
        return EdgeColoring(n, ell, std::move(cells));
    }

    /// Validates a row-major n*n cell table.
    static EdgeColoring from_cells(std::size_t n, std::size_t ell, std::vector<Color> cells)
    {
        if (cells.size() != n * n)
            throw Error(ErrorKind::ShapeMismatch, "cell table has " + std::to_string(cells.size())
                                                      + " entries, expected " + std::to_string(n * n));
        return EdgeColoring(n, ell, std::move(cells));
    }

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t ell() const noexcept { return ell_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return n_ * (n_ - 1) / 2; }

    /// Color of {u, v} with 1-based, checked vertices.
    [[nodiscard]] Color color(std::size_t u, std::size_t v) const
    {
        if (u < 1 || u > n_ || v < 1 || v > n_)
            throw Error(ErrorKind::VertexOutOfRange, "vertex pair (" + std::to_string(u) + ", " + std::to_string(v)
                                                         + ") outside 1.." + std::to_string(n_));
        if (u == v)
            throw Error(ErrorKind::SelfLoop, "vertex " + std::to_string(u));
        return at(u - 1, v - 1);
    }

    // 0-based, unchecked.
    [[nodiscard]] Color at(std::size_t i, std::size_t j) const noexcept { return cells_[i * n_ + j]; }

    [[nodiscard]] std::span<const Color> row(std::size_t i) const noexcept
    {
        return {cells_.data() + i * n_, n_};
    }

    [[nodiscard]] const std::vector<Color>& cells() const noexcept { return cells_; }

    [[nodiscard]] Matrix to_matrix() const
    {
        Matrix m(n_, std::vector<int>(n_, 0));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                m[i][j] = at(i, j);
        return m;
    }

    friend bool operator==(const EdgeColoring&, const EdgeColoring&) = default;

private:
    EdgeColoring(std::size_t n, std::size_t ell, std::vector<Color> cells)
        : n_(n), ell_(ell), cells_(std::move(cells))
    {
        if (n_ < 1)
            throw Error(ErrorKind::ShapeMismatch, "vertex count must be positive");
        if (ell_ < 1 || ell_ > kMaxCoreColors)
            throw Error(ErrorKind::ColorOutOfRange, "color count " + std::to_string(ell_) + " outside 1.."
                                                         + std::to_string(kMaxCoreColors));
        for (std::size_t i = 0; i < n_; ++i) {
            if (at(i, i) != 0)
                throw Error(ErrorKind::BadDiagonal, entry_name(i, i) + " = " + std::to_string(at(i, i)));
            for (std::size_t j = i + 1; j < n_; ++j) {
                const Color c = at(i, j);
                if (c != at(j, i))
                    throw Error(ErrorKind::AsymmetricMatrix, entry_name(i, j) + " = " + std::to_string(c) + " but "
                                                                 + entry_name(j, i) + " = "
                                                                 + std::to_string(at(j, i)));
                if (c < 1 || c > ell_)
                    throw Error(ErrorKind::ColorOutOfRange, entry_name(i, j) + " = " + std::to_string(c)
                                                                + " outside 1.." + std::to_string(ell_));
            }
        }
    }

    static std::string entry_name(std::size_t i, std::size_t j)
    {
        return "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    }

    std::size_t n_;
    std::size_t ell_;
    std::vector<Color> cells_;
};

inline EdgeColoring new_coloring(std::size_t n, std::size_t ell, const EdgeColoring::Matrix& entries)
{
    return EdgeColoring::from_matrix(n, ell, entries);
}

inline Color color_of(const EdgeColoring& coloring, std::size_t u, std::size_t v)
{
    return coloring.color(u, v);
}

/// Per-vertex color incidence counts.
struct BalanceProfile {
    std::size_t n = 0;
    std::size_t ell = 0;
    std::vector<std::uint32_t> counts; // row-major n*ell, 0-based
    std::optional<std::uint32_t> uniform_t;

    // 1-based vertex and color.
    [[nodiscard]] std::uint32_t count(std::size_t v, std::size_t c) const { return counts.at((v - 1) * ell + (c - 1)); }

    [[nodiscard]] std::uint32_t min_count() const noexcept
    {
        std::uint32_t m = counts.empty() ? 0 : counts.front();
        for (auto x : counts)
            m = x < m ? x : m;
        return m;
    }

    [[nodiscard]] std::uint32_t max_count() const noexcept
    {
        std::uint32_t m = 0;
        for (auto x : counts)
            m = x > m ? x : m;
        return m;
    }

    /// 1-based vertices whose row is not uniformly (n-1)/ell.
    [[nodiscard]] std::vector<std::size_t> unbalanced_vertices() const
    {
        std::vector<std::size_t> out;
        const bool divisible = (n - 1) % ell == 0;
        const auto t = static_cast<std::uint32_t>((n - 1) / ell);
        for (std::size_t v = 0; v < n; ++v) {
            bool ok = divisible;
            for (std::size_t c = 0; ok && c < ell; ++c)
                ok = counts[v * ell + c] == t;
            if (!ok)
                out.push_back(v + 1);
        }
        return out;
    }
};

inline BalanceProfile balance_profile(const EdgeColoring& coloring)
{
    BalanceProfile profile;
    profile.n = coloring.n();
    profile.ell = coloring.ell();
    profile.counts.assign(profile.n * profile.ell, 0);
    for (std::size_t v = 0; v < profile.n; ++v) {
        const auto row = coloring.row(v);
        std::uint32_t* counts = profile.counts.data() + v * profile.ell;
        for (std::size_t w = 0; w < profile.n; ++w)
            if (w != v)
                ++counts[row[w] - 1];
    }
    if ((profile.n - 1) % profile.ell == 0) {
        const auto t = static_cast<std::uint32_t>((profile.n - 1) / profile.ell);
        bool uniform = true;
        for (auto x : profile.counts)
            uniform = uniform && x == t;
        if (uniform)
            profile.uniform_t = t;
    }
    return profile;
}

inline bool is_balanced(const EdgeColoring& coloring)
{
    return balance_profile(coloring).uniform_t.has_value();
}

} // namespace rainbow
