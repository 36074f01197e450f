#include "spx/imageio.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spx {

namespace {

// Skips PNM whitespace and '#' comment lines, then reads one unsigned value.
bool read_pnm_value(std::istream& in, long& value) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) return false;
    value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1'000'000'000) return false;
        c = in.get();
    }
    if (c != EOF) in.unget();
    return true;
}

}  // namespace

RgbImage load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open image file: " + path.string());
    }

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '6') {
        throw std::runtime_error("malformed PPM header (expected P6): " + path.string());
    }

    long width = 0, height = 0, maxval = 0;
    if (!read_pnm_value(in, width) || !read_pnm_value(in, height) || !read_pnm_value(in, maxval)) {
        throw std::runtime_error("malformed PPM header: " + path.string());
    }
    if (width < 1 || height < 1) {
        throw std::runtime_error("malformed PPM header (bad dimensions): " + path.string());
    }
    if (maxval < 1 || maxval > 255) {
        throw std::runtime_error("malformed PPM header (only 8-bit maxval supported): " + path.string());
    }

    // Exactly one whitespace byte separates the header from the raster.
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) {
        throw std::runtime_error("malformed PPM header: " + path.string());
    }

    RgbImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.pixels.resize(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size() * sizeof(Rgb8)));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size() * sizeof(Rgb8))) {
        throw std::runtime_error("truncated PPM pixel data: " + path.string());
    }
    return img;
}

void write_ppm(const RgbImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path.string());
    }
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size() * sizeof(Rgb8)));
    if (!out) {
        throw std::runtime_error("failed writing PPM: " + path.string());
    }
}

Labeling read_label_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open label map: " + path.string());
    }

    std::string header;
    if (!std::getline(in, header)) {
        throw std::runtime_error("empty label map: " + path.string());
    }
    std::istringstream hs(header);
    int width = 0, height = 0;
    if (!(hs >> width >> height) || width < 1 || height < 1) {
        throw std::runtime_error("bad label map dimensions: " + path.string());
    }

    Labeling lab;
    lab.width = width;
    lab.height = height;
    lab.ids.reserve(static_cast<std::size_t>(width) * height);
    std::string token;
    for (long i = 0; i < static_cast<long>(width) * height; ++i) {
        if (!(in >> token)) {
            throw std::runtime_error("label map dimension mismatch (too few values): " + path.string());
        }
        std::size_t pos = 0;
        int id = 0;
        try {
            id = std::stoi(token, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != token.size() || id < 0) {
            throw std::runtime_error("non-integer token in label map: '" + token + "' in " + path.string());
        }
        lab.ids.push_back(id);
    }
    if (in >> token) {
        throw std::runtime_error("label map dimension mismatch (trailing values): " + path.string());
    }
    densify_labeling(lab);
    return lab;
}

void write_label_map(const Labeling& lab, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path.string());
    }
    out << lab.width << " " << lab.height << "\n";
    for (int y = 0; y < lab.height; ++y) {
        for (int x = 0; x < lab.width; ++x) {
            if (x) out << ' ';
            out << lab.at(x, y);
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed writing label map: " + path.string());
    }
}

}  // namespace spx
