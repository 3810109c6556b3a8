#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "ionxxz/common.hpp"
#include "ionxxz/config.hpp"
#include "ionxxz/csv.hpp"
#include "ionxxz/svg.hpp"

using namespace ionxxz;

TEST_SUITE("cli_io") {

TEST_CASE("config parses numbers, units, prefixes and comments") {
    const Config cfg = Config::parse("# run card\n"
                                     "ions = 10\n"
                                     "axial = 2pi*1.0e6 hz   # trap drive\n"
                                     "mass = 171 amu\n"
                                     "wavelength = 355 nm\n"
                                     "chain = real\n"
                                     "\n"
                                     "rate = 1e-3\n");
    CHECK(cfg.integer("ions") == 10);
    CHECK(cfg.number("axial") ==
          doctest::Approx(4.0 * M_PI * M_PI * 1.0e6).epsilon(1e-14)); // 2pi scale then hz unit
    CHECK(cfg.number("mass") == doctest::Approx(171 * 1.66053906660e-27).epsilon(1e-14));
    CHECK(cfg.number("wavelength") == doctest::Approx(355e-9).epsilon(1e-14));
    CHECK(cfg.text("chain") == "real");
    CHECK(cfg.number("rate") == doctest::Approx(1e-3).epsilon(1e-16));
    CHECK(cfg.has("rate"));
    CHECK_FALSE(cfg.has("missing"));
    CHECK(cfg.number_or("missing", 7.5) == 7.5);
    CHECK(cfg.integer_or("missing", 3) == 3);
    CHECK(cfg.text_or("missing", "x") == "x");
}

TEST_CASE("config rejects malformed input with the offending line") {
    CHECK_THROWS_WITH_AS(Config::parse("ions 10\n"), doctest::Contains("line 1"), error);
    CHECK_THROWS_WITH_AS(Config::parse("a = 1\nb = \n"), doctest::Contains("line 2"), error);
    CHECK_THROWS_AS(Config::parse("Bad = 1\n"), error);          // uppercase key
    CHECK_THROWS_AS(Config::parse("a = 1 2 3\n"), error);        // too many tokens
    CHECK_THROWS_AS(Config::parse("a = 1 parsec\n"), error);     // unknown unit
    CHECK_THROWS_AS(Config::parse("a = 2pi*real\n"), error);     // prefix on a word
    CHECK_THROWS_AS(Config::parse("a = 1\na = 2\n"), error);     // duplicate
    CHECK_THROWS_AS(Config::parse("a = 1\n", {"b"}), error);     // outside the allow-list
    CHECK_NOTHROW(Config::parse("a = 1\n", {"a", "b"}));
}

TEST_CASE("integers must round-trip exactly") {
    const Config cfg = Config::parse("n = 12\nx = 12.5\n");
    CHECK(cfg.integer("n") == 12);
    CHECK_THROWS_AS(cfg.integer("x"), error);
    CHECK_THROWS_AS(cfg.number("missing"), error);
    CHECK_THROWS_AS(Config::parse("s = word\n").number("s"), error);
}

TEST_CASE("serialization is canonical and hash-stable") {
    const Config a = Config::parse("beta = 2\nalpha = 1\n");
    const Config b = Config::parse("# comment\nalpha = 1.0\n\nbeta = 2.00\n");
    CHECK(a.serialize() == "alpha = 1\nbeta = 2\n");
    CHECK(a.serialize() == b.serialize());
    CHECK(a.hash() == b.hash());

    const Config c = Config::parse("alpha = 1\nbeta = 3\n");
    CHECK(a.hash() != c.hash());

    // round trip through the canonical form is the identity
    const Config back = Config::parse(a.serialize());
    CHECK(back.serialize() == a.serialize());
}

TEST_CASE("programmatic values join the hash") {
    Config cfg;
    cfg.set_number("n", 8.0);
    cfg.set_text("chain", "real");
    const uint64_t h1 = cfg.hash();
    cfg.set_number("n", 9.0);
    CHECK(cfg.hash() != h1);
    CHECK(cfg.integer("n") == 9);
    CHECK(cfg.serialize() == "chain = real\nn = 9\n");
}

TEST_CASE("fnv-1a matches the published test vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("number formatting survives a round trip") {
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.5) == "0.5");
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-250, 250);
    for (int i = 0; i < 500; ++i) {
        const double x = std::ldexp(mant(rng), expo(rng));
        const std::string s = format_number(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(format_integer(-42) == "-42");
}

TEST_CASE("csv body is byte-stable and the header carries the provenance") {
    CsvTable t;
    t.schema = "demo";
    t.config_hash = 0xdeadbeefcafe1234ull;
    t.column("x", "1");
    t.column("y", "omega_z");
    t.row({format_number(0.25), format_number(1.0 / 3.0)});
    t.row({format_number(2.0), format_number(-7.125)});

    const std::string frozen = render_csv(t, false);
    CHECK(frozen == render_csv(t, false));
    CHECK(frozen.find("# schema: demo\n") != std::string::npos);
    CHECK(frozen.find("# columns: x [1], y [omega_z]\n") != std::string::npos);
    CHECK(frozen.find("# config_hash: deadbeefcafe1234\n") != std::string::npos);
    CHECK(frozen.find("x,y\n") != std::string::npos);
    CHECK(frozen.find("0.25,0.33333333333333331\n") != std::string::npos);

    // with a timestamp only the header differs, never the body
    const std::vector<std::string> b1 = csv_body_lines(render_csv(t, true));
    const std::vector<std::string> b2 = csv_body_lines(frozen);
    CHECK(b1 == b2);
    CHECK(render_csv(t, true).find("# generated: ") != std::string::npos);

    CsvTable bad = t;
    CHECK_THROWS_AS(bad.row({"only-one-cell"}), error);
}

TEST_CASE("svg rendering is deterministic and self-contained") {
    SvgPlot plot;
    plot.caption = "demo <&> caption";
    plot.x_label = "x";
    plot.y_label = "f(x)";
    SvgSeries s;
    s.label = "series<1>";
    s.markers = true;
    for (int i = 0; i <= 10; ++i) {
        s.x.push_back(0.1 * i);
        s.y.push_back(std::sin(0.1 * i));
    }
    plot.series.push_back(s);
    SvgArrow a;
    a.x = 0.5;
    a.y = 0.2;
    a.dx = 1.0;
    a.dy = -0.5;
    plot.arrows.push_back(a);

    const std::string svg = render_svg(plot);
    CHECK(svg == render_svg(plot));
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("demo &lt;&amp;&gt; caption") != std::string::npos);
    CHECK(svg.find("series&lt;1&gt;") != std::string::npos);
    CHECK(svg.find("generated") == std::string::npos); // no timestamps anywhere
    CHECK(svg.find("polygon") != std::string::npos);   // the arrow head
}

TEST_CASE("log axes drop unusable points instead of failing") {
    SvgPlot plot;
    plot.log_x = plot.log_y = true;
    SvgSeries s;
    s.x = {1e-3, 1e-2, -1.0, 1e-1}; // negative point cannot appear on a log axis
    s.y = {2.0, 4.0, 8.0, 16.0};
    plot.series.push_back(s);
    CHECK_NOTHROW(render_svg(plot));

    SvgPlot empty;
    CHECK_THROWS_AS(render_svg(empty), error);
    SvgPlot allbad;
    allbad.log_x = true;
    SvgSeries nn;
    nn.x = {-1.0, -2.0};
    nn.y = {1.0, 2.0};
    allbad.series.push_back(nn);
    CHECK_THROWS_AS(render_svg(allbad), error);
}

}
