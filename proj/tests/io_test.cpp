#include "oracles.hpp"

#include <rainbow/construct.hpp>
#include <rainbow/io.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <map>
#include <regex>

using namespace rainbow;

namespace {

const char* kTriangle = "3 2\n0 1 2\n1 0 1\n2 1 0\n";

ErrorKind parse_kind(const std::string& text)
{
    try {
        parse_matrix(text);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "parsed: " << text;
    return ErrorKind::IoError;
}

std::size_t count_of(const std::string& s, const std::string& needle)
{
    std::size_t hits = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1))
        ++hits;
    return hits;
}

} // namespace

TEST(MatrixFormat, ParsesAndFormats)
{
    const auto c = parse_matrix(kTriangle);
    EXPECT_EQ(c.n(), 3u);
    EXPECT_EQ(c.ell(), 2u);
    EXPECT_EQ(c.color(1, 3), 2);
    EXPECT_EQ(format_matrix(c), kTriangle);
    // Extra blank lines and spacing are tolerated.
    EXPECT_EQ(parse_matrix("3  2\n\n0 1 2\n 1 0 1\n2 1 0\n\n"), c);
}

TEST(MatrixFormat, RejectsMalformedText)
{
    EXPECT_EQ(parse_kind(""), ErrorKind::ParseError);
    EXPECT_EQ(parse_kind("3\n0 1 1\n1 0 1\n1 1 0\n"), ErrorKind::ParseError);
    EXPECT_EQ(parse_kind("3 2\r\n0 1 2\r\n1 0 1\r\n2 1 0\r\n"), ErrorKind::ParseError);
    EXPECT_EQ(parse_kind("3 2\n0 1 2\n1 0 1\n"), ErrorKind::ParseError);
    EXPECT_EQ(parse_kind("3 2\n0 1 2\n1 0 1 1\n2 1 0\n"), ErrorKind::ParseError);
    EXPECT_EQ(parse_kind("3 2\n0 1 x\n1 0 1\n2 1 0\n"), ErrorKind::ParseError);
    EXPECT_EQ(parse_kind("3 2\n0 1 2\n1 0 1\n1 1 0\n"), ErrorKind::ParseError);  // asymmetric
    EXPECT_EQ(parse_kind("3 2\n0 1 3\n1 0 1\n3 1 0\n"), ErrorKind::ParseError);  // color 3 > ell
    EXPECT_EQ(parse_kind("3 2\n1 1 2\n1 0 1\n2 1 0\n"), ErrorKind::ParseError);  // diagonal
    EXPECT_EQ(parse_kind("3 2\n0 -1 2\n-1 0 1\n2 1 0\n"), ErrorKind::ParseError);
}

TEST(MatrixFormat, ErrorNamesTheProblem)
{
    try {
        parse_matrix("3 2\n0 1 2\n1 0 1\n1 1 0\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("symmetric"), std::string::npos) << e.what();
    }
}

TEST(JsonFormat, RoundTripProperty)
{
    SplitMix64 rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = oracle::random_coloring(1 + rng.below(12), 1 + rng.below(7), rng);
        CertificateFile file{c, trial % 2 ? std::optional<std::size_t>(4) : std::nullopt};
        file.meta["trial"] = trial;
        const auto text = format_certificate_json(file);
        const auto back = parse_certificate_json(text);
        ASSERT_EQ(back.coloring, c);
        ASSERT_EQ(back.q, file.q);
        ASSERT_EQ(back.meta, file.meta);
        ASSERT_EQ(format_certificate_json(back), text);
        ASSERT_EQ(parse_matrix(format_matrix(c)), c);
    }
}

TEST(JsonFormat, OneRowPerLine)
{
    const auto text = format_certificate_json({k13_certificate(), 4});
    EXPECT_NE(text.find("    [0, 2, 5, 4, 1, 3, 3, 6, 4, 2, 6, 5, 1],\n"), std::string::npos);
    EXPECT_NE(text.find("\"q\": 4"), std::string::npos);
    EXPECT_EQ(nlohmann::json::parse(text)["matrix"].size(), 13u);
}

TEST(JsonFormat, RejectsBadDocuments)
{
    for (const char* doc : {
             "not json",
             "[1, 2]",
             R"({"ell": 1, "matrix": [[0]]})",
             R"({"n": 2, "ell": 1, "matrix": [[0, 1], [2, 0]]})",
             R"({"n": 2, "ell": 1, "matrix": [[0, 1], [1, 0]], "q": -1})",
             R"({"n": 2, "ell": 1, "matrix": [[0, "1"], [1, 0]]})",
             R"({"n": 3, "ell": 1, "matrix": [[0, 1], [1, 0]]})",
         }) {
        try {
            parse_certificate_json(doc);
            ADD_FAILURE() << doc;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError) << doc;
        }
    }
}

TEST(Files, WriteLoadAndFormatDispatch)
{
    const auto dir = std::filesystem::temp_directory_path() / "rainbow_io_test";
    std::filesystem::create_directories(dir);
    const auto txt = (dir / "c.txt").string();
    const auto json = (dir / "c.json").string();
    const CertificateFile file{k13_certificate(), 4};
    write_file(txt, format_certificate(file, format_for_path(txt)));
    write_file(json, format_certificate(file, format_for_path(json)));
    EXPECT_EQ(format_for_path(txt), FileFormat::matrix);
    EXPECT_EQ(format_for_path(json), FileFormat::json);
    EXPECT_EQ(load_certificate(txt).coloring, k13_certificate());
    EXPECT_FALSE(load_certificate(txt).q);
    EXPECT_EQ(load_certificate(json).q, std::optional<std::size_t>(4));
    try {
        load_certificate((dir / "missing.txt").string());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoError);
    }
    std::filesystem::remove_all(dir);
}

TEST(Dot, CertificateDrawing)
{
    const auto dot = export_dot(k13_certificate());
    EXPECT_EQ(dot.rfind("graph coloring {", 0), 0u);
    EXPECT_EQ(count_of(dot, " -- "), 78u);
    std::map<std::string, int> per_color;
    const std::regex edge(R"re((\d+) -- (\d+) \[color="(\w+)"\])re");
    for (std::sregex_iterator it(dot.begin(), dot.end(), edge), end; it != end; ++it)
        ++per_color[(*it)[3]];
    ASSERT_EQ(per_color.size(), 6u);
    for (const auto& [name, edges] : per_color)
        EXPECT_EQ(edges, 13) << name;
    EXPECT_NE(dot.find("1 -- 2 [color=\"blue\"]"), std::string::npos);
    EXPECT_NE(dot.find("1 -- 5 [color=\"red\"]"), std::string::npos);
    // Vertex 1 at the top of the circle.
    EXPECT_NE(dot.find("1 [pos=\"0.0000,2.5000!\"]"), std::string::npos);
    EXPECT_EQ(export_dot(k13_certificate()), dot);
}

TEST(Dot, MonochromaticTriangle)
{
    const auto dot = export_dot(new_coloring(3, 1, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
    EXPECT_EQ(count_of(dot, " -- "), 3u);
    EXPECT_EQ(count_of(dot, "color=\"red\""), 3u);
}

TEST(Tikz, StandaloneDocumentGroupedByColor)
{
    const auto tex = export_tikz(k13_certificate());
    EXPECT_EQ(tex.rfind("\\documentclass[tikz,border=2mm]{standalone}", 0), 0u);
    EXPECT_NE(tex.find("\\end{document}\n"), std::string::npos);
    EXPECT_EQ(count_of(tex, "\\coordinate (v"), 13u);
    EXPECT_EQ(count_of(tex, "\\node[vtx"), 13u);
    for (std::size_t c = 0; c < 6; ++c)
        EXPECT_EQ(count_of(tex, "\\draw[color=" + std::string(kPalette[c]) + "]"), 13u);
    // A color class is contiguous.
    const auto first = tex.find("\\draw[color=red]"), last = tex.rfind("\\draw[color=red]");
    EXPECT_EQ(count_of(tex.substr(first, last - first), "\\draw[color=blue]"), 0u);
    EXPECT_EQ(export_tikz(k13_certificate()), tex);
}

TEST(Palette, ExhaustedAboveTwelveColors)
{
    SplitMix64 rng(1);
    EXPECT_NO_THROW(export_dot(oracle::random_coloring(6, 12, rng)));
    const auto wide = oracle::random_coloring(6, 13, rng);
    for (auto f : {export_dot, export_tikz}) {
        try {
            f(wide);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::PaletteExhausted);
        }
    }
}
