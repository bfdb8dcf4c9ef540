#include <gtest/gtest.h>

#include <dholo/dholo.hpp>

using namespace dholo;

namespace {

std::string schema_error(const std::string& text) {
    try {
        parse(text);
    } catch (const SchemaError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Document, RoundTripEveryGenerator) {
    for (const TilingDocument& doc : {generate_square(6), generate_dual_kagome(5.0), generate_penrose(6.0, 7)}) {
        const std::string text = dump(doc);
        const TilingDocument back = parse(text);
        EXPECT_EQ(back, doc) << doc.kind;
        EXPECT_EQ(dump(back), text) << doc.kind;
    }
}

TEST(Document, PayloadsSurviveRoundTrip) {
    TilingDocument doc = generate_square(3);
    doc.payloads["f"] = {{0, cplx(0.1, -2.5e-300)}, {5, cplx(1.0 / 3.0, 1e17)}};
    doc.covering = CoveringMeta{2, {0.5, -1.25}};
    EXPECT_EQ(parse(dump(doc)), doc);
}

TEST(Document, SquareCounts) {
    const TilingDocument doc = generate_square(10);
    EXPECT_EQ(doc.faces.size(), 100u);
    EXPECT_EQ(doc.vertices.size(), 121u);
    EXPECT_EQ(doc.version, schema_version);
}

TEST(Document, GeneratorsAreDeterministic) {
    EXPECT_EQ(dump(generate_penrose(6.0, 9)), dump(generate_penrose(6.0, 9)));
    EXPECT_EQ(dump(generate_dual_kagome(5.0, 3)), dump(generate_dual_kagome(5.0, 3)));
}

TEST(Document, MissingFieldIsNamed) {
    auto j = nlohmann::json::parse(dump(generate_square(2)));
    j.erase("faces");
    EXPECT_NE(schema_error(j.dump()).find("faces"), std::string::npos);
    auto k = nlohmann::json::parse(dump(generate_square(2)));
    k["vertices"][1].erase("color");
    EXPECT_NE(schema_error(k.dump()).find("color"), std::string::npos);
}

TEST(Document, TruncatedTextIsRejected) {
    const std::string text = dump(generate_square(2));
    EXPECT_NE(schema_error(text.substr(0, text.size() / 2)).find("JSON parse error"), std::string::npos);
}

TEST(Document, VersionMismatch) {
    auto j = nlohmann::json::parse(dump(generate_square(2)));
    j["schema_version"] = 99;
    EXPECT_NE(schema_error(j.dump()).find("unsupported schema_version 99"), std::string::npos);
}

TEST(Document, InvalidContentRejected) {
    auto j = nlohmann::json::parse(dump(generate_square(2)));
    j["faces"][0][0] = 1000;
    EXPECT_NE(schema_error(j.dump()).find("unknown vertex"), std::string::npos);
    auto k = nlohmann::json::parse(dump(generate_square(2)));
    k["payloads"] = {{"f", {{"x", {1.0, 0.0}}}}};
    EXPECT_NE(schema_error(k.dump()).find("not a vertex id"), std::string::npos);
}

TEST(Document, MissingFileThrowsInvalidInput) { EXPECT_THROW(load("/nonexistent/dir/tiling.json"), InvalidInput); }

TEST(Svg, TilingHasViewBoxAndFaces) {
    const std::string svg = render_svg(generate_square(4), SvgLayer::tiling);
    EXPECT_NE(svg.find("viewBox=\""), std::string::npos);
    EXPECT_NE(svg.find("<polygon"), std::string::npos);
    EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST(Svg, HeatRamp) {
    EXPECT_EQ(heat_color(0.0), (std::array<int, 3>{0, 64, 255}));
    EXPECT_EQ(heat_color(1.0), (std::array<int, 3>{255, 191, 0}));
    EXPECT_EQ(heat_color(0.5), (std::array<int, 3>{128, 128, 127}));
    EXPECT_EQ(heat_color(-3.0), heat_color(0.0));
}

TEST(Svg, PayloadLayers) {
    TilingDocument doc = generate_square(4);
    EXPECT_THROW(render_svg(doc, SvgLayer::heatmap), InvalidInput);
    doc.payloads["f"] = {{0, 1.0}};
    EXPECT_THROW(render_svg(doc, SvgLayer::heatmap, "g"), InvalidInput);
    EXPECT_NE(render_svg(doc, SvgLayer::heatmap, "f").find("rgb("), std::string::npos);
    EXPECT_THROW(render_svg(doc, SvgLayer::pattern, "f"), InvalidInput);
    EXPECT_THROW(parse_layer("bogus"), InvalidInput);
}
