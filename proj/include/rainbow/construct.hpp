#pragma once

// The balanced 6-coloring of K_13 without a rainbow K_4, and lexicographic
// blow-ups of colorings.

#include "core.hpp"

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace rainbow {

inline constexpr std::size_t kDefaultVertexCap = 13 * 13 * 13;

namespace detail {

inline constexpr std::array<std::array<int, 13>, 13> kK13Matrix{{
    {0, 2, 5, 4, 1, 3, 3, 6, 4, 2, 6, 5, 1},
    {2, 0, 3, 6, 5, 6, 4, 1, 3, 1, 4, 5, 2},
    {5, 3, 0, 5, 4, 2, 6, 3, 1, 6, 2, 1, 4},
    {4, 6, 5, 0, 2, 4, 5, 2, 1, 3, 3, 1, 6},
    {1, 5, 4, 2, 0, 3, 1, 6, 2, 5, 4, 6, 3},
    {3, 6, 2, 4, 3, 0, 1, 4, 5, 6, 5, 2, 1},
    {3, 4, 6, 5, 1, 1, 0, 2, 5, 4, 2, 6, 3},
    {6, 1, 3, 2, 6, 4, 2, 0, 3, 5, 1, 4, 5},
    {4, 3, 1, 1, 2, 5, 5, 3, 0, 4, 6, 2, 6},
    {2, 1, 6, 3, 5, 6, 4, 5, 4, 0, 1, 3, 2},
    {6, 4, 2, 3, 4, 5, 2, 1, 6, 1, 0, 3, 5},
    {5, 5, 1, 1, 6, 2, 6, 4, 2, 3, 3, 0, 4},
    {1, 2, 4, 6, 3, 1, 3, 5, 6, 2, 5, 4, 0},
}};

} // namespace detail

/// Balanced 6-coloring of K_13 (every vertex sees every color twice) with no rainbow K_4.
inline EdgeColoring k13_certificate()
{
    EdgeColoring::Matrix m(13, std::vector<int>(13));
    for (std::size_t i = 0; i < 13; ++i)
        for (std::size_t j = 0; j < 13; ++j)
            m[i][j] = detail::kK13Matrix[i][j];
    return EdgeColoring::from_matrix(13, 6, m);
}

/// Position of a vertex of the k-th lexicographic power of K_n, most
/// significant digit first (the outermost block).
struct PowerIndex {
    std::size_t base_n = 0;
    std::vector<std::size_t> digits; // each in 1..base_n

    /// 1-based vertex of K_{n^k} -> digit tuple.
    static PowerIndex from_vertex(std::size_t base_n, std::size_t k, std::size_t vertex)
    {
        if (base_n < 1 || k < 1)
            throw Error(ErrorKind::ShapeMismatch, "power index needs base_n >= 1 and k >= 1");
        PowerIndex index{base_n, std::vector<std::size_t>(k)};
        std::size_t rest = vertex - 1;
        for (std::size_t d = k; d-- > 0;) {
            index.digits[d] = rest % base_n + 1;
            rest /= base_n;
        }
        if (vertex < 1 || rest != 0)
            throw Error(ErrorKind::VertexOutOfRange, "vertex " + std::to_string(vertex) + " outside K_{"
                                                         + std::to_string(base_n) + "^" + std::to_string(k) + "}");
        return index;
    }

    [[nodiscard]] std::size_t to_vertex() const
    {
        std::size_t v = 0;
        for (auto d : digits) {
            if (d < 1 || d > base_n)
                throw Error(ErrorKind::VertexOutOfRange, "digit " + std::to_string(d) + " outside 1.."
                                                             + std::to_string(base_n));
            v = v * base_n + (d - 1);
        }
        return v + 1;
    }

    friend bool operator==(const PowerIndex&, const PowerIndex&) = default;
};

/// Blow-up of `outer` by `inner`: vertex (a, b) is numbered (a-1)*inner.n + b.
/// Edges between distinct blocks take the outer color of the block pair,
/// edges inside a block take the inner color.
inline EdgeColoring lex_compose(const EdgeColoring& outer, const EdgeColoring& inner)
{
    if (outer.ell() != inner.ell())
        throw Error(ErrorKind::ColorCountMismatch, "outer has " + std::to_string(outer.ell())
                                                       + " colors, inner has " + std::to_string(inner.ell()));
    const std::size_t on = outer.n();
    const std::size_t in = inner.n();
    const std::size_t n = on * in;
    std::vector<Color> cells(n * n);
    for (std::size_t a = 0; a < on; ++a) {
        for (std::size_t b = 0; b < in; ++b) {
            Color* row = cells.data() + (a * in + b) * n;
            for (std::size_t a2 = 0; a2 < on; ++a2) {
                Color* block = row + a2 * in;
                if (a2 == a) {
                    const auto irow = inner.row(b);
                    for (std::size_t b2 = 0; b2 < in; ++b2)
                        block[b2] = irow[b2];
                } else {
                    const Color c = outer.at(a, a2);
                    for (std::size_t b2 = 0; b2 < in; ++b2)
                        block[b2] = c;
                }
            }
        }
    }
    return EdgeColoring::from_cells(n, outer.ell(), std::move(cells));
}

/// k-fold lexicographic power; throws SizeOverflow when n^k exceeds `vertex_cap`.
inline EdgeColoring lex_power(const EdgeColoring& base, std::size_t k, std::size_t vertex_cap = kDefaultVertexCap)
{
    if (k < 1)
        throw Error(ErrorKind::InvalidConfig, "exponent must be at least 1");
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (total > std::numeric_limits<std::size_t>::max() / base.n() || total * base.n() > vertex_cap)
            throw Error(ErrorKind::SizeOverflow, std::to_string(base.n()) + "^" + std::to_string(k)
                                                     + " exceeds the vertex cap " + std::to_string(vertex_cap));
        total *= base.n();
    }
    EdgeColoring result = base;
    for (std::size_t i = 1; i < k; ++i)
        result = lex_compose(result, base);
    return result;
}

} // namespace rainbow
