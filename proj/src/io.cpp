#include "rnmf/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rnmf {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return in;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_value(const std::string& token, const std::filesystem::path& path,
                   std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str()) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": not a number: '" + token + "'");
    }
    if (!std::isfinite(v)) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": non-finite value");
    }
    return v;
}

// Skips PGM whitespace and '#' comments, returns the next token.
std::string pgm_token(std::istream& in, const std::filesystem::path& path) {
    std::string token;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (token.empty()) throw std::runtime_error(path.string() + ": truncated PGM header");
    return token;
}

std::size_t pgm_number(std::istream& in, const std::filesystem::path& path) {
    const std::string token = pgm_token(in, path);
    try {
        return static_cast<std::size_t>(std::stoull(token));
    } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ": bad PGM header field '" + token + "'");
    }
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_value(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string token;
        while (std::getline(ss, token, ',')) {
            row.push_back(parse_value(token, path, line_no));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": ragged row, " + std::to_string(row.size()) +
                                     " values, expected " + std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path.string() + ": empty matrix file");
    DenseMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

void write_index_csv(const std::filesystem::path& path, const IndexSet& indices) {
    std::ofstream out = open_out(path);
    for (const auto& [i, j] : indices) out << i << ',' << j << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

IndexSet read_index_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    IndexSet out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 'row,col'");
        }
        out.emplace_back(std::stoull(line.substr(0, comma)), std::stoull(line.substr(comma + 1)));
    }
    return out;
}

void write_labels_csv(const std::filesystem::path& path, const LabelVector& labels) {
    std::ofstream out = open_out(path);
    for (long long v : labels) out << v << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

LabelVector read_labels_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    LabelVector out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            out.push_back(std::stoll(line));
        } catch (const std::exception&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": not an integer label: '" + line + "'");
        }
    }
    if (out.empty()) throw std::runtime_error(path.string() + ": no labels");
    return out;
}

PgmImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    const std::string magic = pgm_token(in, path);
    if (magic != "P2" && magic != "P5") {
        throw std::runtime_error(path.string() + ": unsupported PGM magic '" + magic + "'");
    }
    PgmImage img;
    img.width = pgm_number(in, path);
    img.height = pgm_number(in, path);
    const std::size_t maxval = pgm_number(in, path);
    if (maxval == 0 || maxval > 65535) {
        throw std::runtime_error(path.string() + ": PGM maxval out of range");
    }
    const std::size_t count = img.width * img.height;
    img.pixels.reserve(count);
    if (magic == "P2") {
        for (std::size_t i = 0; i < count; ++i) {
            img.pixels.push_back(static_cast<double>(pgm_number(in, path)));
        }
    } else {
        // Binary payload starts after exactly one whitespace byte, already
        // consumed by the maxval token read.
        const std::size_t bytes_per = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(count * bytes_per);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
            throw std::runtime_error(path.string() + ": truncated PGM payload");
        }
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t value = bytes_per == 1
                                          ? buf[i]
                                          : (static_cast<std::size_t>(buf[2 * i]) << 8) |
                                                buf[2 * i + 1];
            img.pixels.push_back(static_cast<double>(value));
        }
    }
    for (double v : img.pixels) {
        if (v > static_cast<double>(maxval)) {
            throw std::runtime_error(path.string() + ": pixel exceeds maxval");
        }
    }
    return img;
}

DenseMatrix load_pgm_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) throw std::runtime_error("no .pgm files in " + dir.string());
    std::sort(files.begin(), files.end());

    std::vector<PgmImage> images;
    images.reserve(files.size());
    for (const auto& f : files) images.push_back(read_pgm(f));
    for (const auto& img : images) {
        if (img.height != images.front().height || img.width != images.front().width) {
            throw std::runtime_error("PGM images in " + dir.string() + " have mixed shapes");
        }
    }
    DenseMatrix m(images.front().pixels.size(), images.size());
    for (std::size_t j = 0; j < images.size(); ++j) {
        for (std::size_t i = 0; i < images[j].pixels.size(); ++i) m(i, j) = images[j].pixels[i];
    }
    return m;
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) return load_pgm_dir(path);
    return read_matrix_csv(path);
}

}  // namespace rnmf
