#include <doctest.h>

#include <random>

#include "brickvm/support/hash.hpp"
#include "brickvm/support/png.hpp"
#include "brickvm/support/text.hpp"
#include "brickvm/support/xml.hpp"
#include "brickvm/support/zip.hpp"

using namespace brickvm;

TEST_CASE("zip archives round-trip and are byte-stable") {
    std::mt19937 rng(3);
    zip::Entries entries;
    entries["code.xml"] = to_bytes("<program/>\n");
    entries["images/a.png"] = Bytes(4000);
    for (auto& b : entries["images/a.png"]) b = static_cast<std::uint8_t>(rng() % 7);
    entries["sounds/empty"] = {};
    auto archive = zip::write(entries);
    CHECK(zip::read(archive) == entries);
    CHECK(zip::write(zip::read(archive)) == archive);
}

TEST_CASE("zip reader rejects garbage") {
    CHECK_THROWS_AS(zip::read(to_bytes("definitely not a zip archive")), zip::ZipError);
    auto archive = zip::write({{"x", to_bytes("hello")}});
    archive[33] ^= 0xFF;  // inside the compressed payload
    CHECK_THROWS_AS(zip::read(archive), zip::ZipError);
}

TEST_CASE("png encode/decode preserves RGBA") {
    png::Image img(3, 2);
    img.set(0, 0, 255, 0, 0, 255);
    img.set(2, 1, 1, 2, 3, 4);
    auto decoded = png::decode(png::encode(img));
    CHECK(decoded.width == 3);
    CHECK(decoded.height == 2);
    CHECK(decoded.rgba == img.rgba);
    CHECK_THROWS_AS(png::decode(to_bytes("nope")), png::PngError);
}

TEST_CASE("xml writer is canonical") {
    auto doc = xml::parse(R"(<root b="2" a="1"><leaf x="&lt;&quot;">t &amp; u</leaf><empty/></root>)");
    CHECK(doc.attributes.begin()->first == "a");
    auto text = xml::write(doc);
    CHECK(text ==
          "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          "<root a=\"1\" b=\"2\">\n"
          "  <leaf x=\"&lt;&quot;\">t &amp; u</leaf>\n"
          "  <empty/>\n"
          "</root>\n");
    CHECK(xml::write(xml::parse(text)) == text);
    CHECK_THROWS_AS(xml::parse("<a><b></a>"), xml::XmlError);
}

TEST_CASE("number formatting is shortest round-trip") {
    CHECK(text::format_number(3.0) == "3");
    CHECK(text::format_number(-10.0) == "-10");
    CHECK(text::format_number(0.1) == "0.1");
    CHECK(text::parse_number("  2.5e1 ") == 25.0);
    CHECK_FALSE(text::parse_number("2x").has_value());
    CHECK(text::parse_leading_number("12abc") == 12.0);
    CHECK(text::parse_leading_number("abc") == 0.0);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 1000; ++i) {
        double v = std::ldexp(static_cast<double>(rng() >> 11), static_cast<int>(rng() % 200) - 100);
        CHECK(text::parse_number(text::format_number(v)) == v);
    }
}

TEST_CASE("percent escaping is reversible") {
    std::string s = "a=b,c\n%d";
    CHECK(text::percent_escape(s).find_first_of("=,\n") == std::string::npos);
    CHECK(text::percent_unescape(text::percent_escape(s)) == s);
}

TEST_CASE("fnv1a matches the published test vector") {
    CHECK(fnv1a64(to_bytes("")) == 0xcbf29ce484222325ull);
    CHECK(fnv1a64(to_bytes("a")) == 0xaf63dc4c8601ec8cull);
}
