#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "spx/image.hpp"
#include "spx/imageio.hpp"
#include "test_support.hpp"

using namespace spx;

namespace {

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("load_ppm decodes a 2x2 all-white P6 file") {
    const auto dir = support::scratch_dir("imageio_white");
    write_bytes(dir / "w.ppm", std::string("P6\n2 2\n255\n") + std::string(12, '\xff'));
    const RgbImage img = load_ppm(dir / "w.ppm");
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    REQUIRE(img.pixels.size() == 4);
    for (const Rgb8& p : img.pixels) {
        CHECK(p.r == 255);
        CHECK(p.g == 255);
        CHECK(p.b == 255);
    }
}

TEST_CASE("load_ppm reports missing file, bad header and truncation distinctly") {
    const auto dir = support::scratch_dir("imageio_errors");

    CHECK_THROWS_WITH_AS(load_ppm(dir / "absent.ppm"), doctest::Contains("cannot open"),
                         std::runtime_error);

    write_bytes(dir / "bad.ppm", "P5\n2 2\n255\nxxxx");
    CHECK_THROWS_WITH_AS(load_ppm(dir / "bad.ppm"), doctest::Contains("header"),
                         std::runtime_error);

    // Header promises 4x4 but only 3 pixels of data follow.
    write_bytes(dir / "trunc.ppm", std::string("P6\n4 4\n255\n") + std::string(9, '\x00'));
    CHECK_THROWS_WITH_AS(load_ppm(dir / "trunc.ppm"), doctest::Contains("truncated"),
                         std::runtime_error);
}

TEST_CASE("load_ppm handles comments and a BSDS-sized raster") {
    const auto dir = support::scratch_dir("imageio_bsds");
    std::string data = "P6\n# comment line\n481 321\n255\n";
    data += std::string(481 * 321 * 3, '\x40');
    write_bytes(dir / "img.ppm", data);
    const RgbImage img = load_ppm(dir / "img.ppm");
    CHECK(img.width == 481);
    CHECK(img.height == 321);
    CHECK(img.pixels.size() == 154401);
}

TEST_CASE("write_ppm / load_ppm round trip") {
    const auto dir = support::scratch_dir("imageio_roundtrip");
    support::TestRng rng(7);
    RgbImage img;
    img.width = 13;
    img.height = 9;
    img.pixels.resize(13 * 9);
    for (auto& p : img.pixels) {
        p.r = static_cast<std::uint8_t>(rng.below(256));
        p.g = static_cast<std::uint8_t>(rng.below(256));
        p.b = static_cast<std::uint8_t>(rng.below(256));
    }
    write_ppm(img, dir / "rt.ppm");
    const RgbImage back = load_ppm(dir / "rt.ppm");
    REQUIRE(back.pixels.size() == img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        CHECK(back.pixels[i].r == img.pixels[i].r);
        CHECK(back.pixels[i].g == img.pixels[i].g);
        CHECK(back.pixels[i].b == img.pixels[i].b);
    }
}

TEST_CASE("rgb_to_lab anchor colors") {
    RgbImage img;
    img.width = 3;
    img.height = 1;
    img.pixels = {{0, 0, 0}, {255, 255, 255}, {255, 0, 0}};
    const LabImage lab = rgb_to_lab(img);

    CHECK(lab.pixels[0].l == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(lab.pixels[0].a == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(lab.pixels[0].b == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(lab.pixels[1].l == doctest::Approx(100.0).epsilon(1e-4));
    CHECK(std::abs(lab.pixels[1].a) < 0.01);
    CHECK(std::abs(lab.pixels[1].b) < 0.01);

    CHECK(std::abs(lab.pixels[2].l - 53.2408) < 0.1);
    CHECK(std::abs(lab.pixels[2].a - 80.0925) < 0.1);
    CHECK(std::abs(lab.pixels[2].b - 67.2032) < 0.1);
}

TEST_CASE("gray ramp maps to monotone L with neutral a/b") {
    RgbImage img;
    img.width = 256;
    img.height = 1;
    img.pixels.resize(256);
    for (int v = 0; v < 256; ++v) {
        img.pixels[v] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v),
                         static_cast<std::uint8_t>(v)};
    }
    const LabImage lab = rgb_to_lab(img);
    double prev = -1.0;
    for (const Lab& p : lab.pixels) {
        CHECK(p.l > prev);
        prev = p.l;
        CHECK(std::abs(p.a) < 0.01);
        CHECK(std::abs(p.b) < 0.01);
        CHECK(p.l >= 0.0);
        CHECK(p.l <= 100.0001);
    }
}

TEST_CASE("label map examples") {
    const auto dir = support::scratch_dir("imageio_labels");

    SUBCASE("direct parse") {
        write_bytes(dir / "a.labels", "2 2\n0 0\n1 1\n");
        const Labeling lab = read_label_map(dir / "a.labels");
        CHECK(lab.width == 2);
        CHECK(lab.height == 2);
        CHECK(lab.region_count == 2);
        CHECK(lab.ids == std::vector<int>{0, 0, 1, 1});
    }
    SUBCASE("ids densified by first occurrence") {
        write_bytes(dir / "d.labels", "4 1\n0 5 5 9\n");
        const Labeling lab = read_label_map(dir / "d.labels");
        CHECK(lab.ids == std::vector<int>{0, 1, 1, 2});
        CHECK(lab.region_count == 3);
    }
    SUBCASE("dimension mismatch") {
        write_bytes(dir / "short.labels", "3 2\n0 0 0\n1 1\n");
        CHECK_THROWS_WITH_AS(read_label_map(dir / "short.labels"),
                             doctest::Contains("dimension mismatch"), std::runtime_error);
        write_bytes(dir / "long.labels", "2 1\n0 0 0\n");
        CHECK_THROWS_WITH_AS(read_label_map(dir / "long.labels"),
                             doctest::Contains("dimension mismatch"), std::runtime_error);
    }
    SUBCASE("non-integer token") {
        write_bytes(dir / "tok.labels", "2 1\n0 x\n");
        CHECK_THROWS_WITH_AS(read_label_map(dir / "tok.labels"),
                             doctest::Contains("non-integer"), std::runtime_error);
    }
}

TEST_CASE("read/write label map is the identity on densified labelings") {
    const auto dir = support::scratch_dir("imageio_label_rt");
    support::TestRng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const int w = 1 + rng.below(12);
        const int h = 1 + rng.below(12);
        const Labeling lab = support::random_labeling(rng, w, h, 6);
        write_label_map(lab, dir / "rt.labels");
        const Labeling back = read_label_map(dir / "rt.labels");
        CHECK(back.width == lab.width);
        CHECK(back.height == lab.height);
        CHECK(back.region_count == lab.region_count);
        CHECK(back.ids == lab.ids);
    }
}
