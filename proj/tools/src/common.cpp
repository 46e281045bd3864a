#include "common.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "toposeg/error.hpp"

#ifndef TOPOSEG_VERSION
#define TOPOSEG_VERSION "0.0.0"
#endif

namespace toposeg::cli {

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

double round9(double v) { return std::stod(fmt9(v)); }

Json ManifestBuilder::build() const {
    Json m;
    m["tool"] = "toposeg";
    m["version"] = TOPOSEG_VERSION;
    m["subcommand"] = subcommand;
    m["inputs"] = inputs;
    m["config"] = config;
    m["seed"] = seed;
    m["rng"] = "mt19937_64";
    return m;
}

void print_json(const Json& doc) { std::fputs((doc.dump(2) + "\n").c_str(), stdout); }

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace toposeg::cli
