#include "gradgeom/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gradgeom/errors.hpp"

namespace gradgeom::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::uint64_t to_le_bits(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r = (r << 8) | ((bits >> (8 * i)) & 0xffu);
        bits = r;
    }
    return bits;
}

double from_le_bits(std::uint64_t bits) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r = (r << 8) | ((bits >> (8 * i)) & 0xffu);
        bits = r;
    }
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

void save_checkpoint(const Model& model, const std::string& path_stem) {
    nlohmann::json meta;
    meta["format_version"] = kFormatVersion;
    meta["layer_dims"] = model.layer_dims();
    meta["activation"] = model.activation() == Activation::tanh ? "tanh" : "identity";
    meta["K"] = model.param_count();

    std::ofstream jf(path_stem + ".json");
    if (!jf) throw io_error("cannot write checkpoint metadata " + path_stem + ".json");
    jf << meta.dump(2) << "\n";

    std::ofstream bf(path_stem + ".bin", std::ios::binary);
    if (!bf) throw io_error("cannot write checkpoint sidecar " + path_stem + ".bin");
    for (double v : model.theta()) {
        const std::uint64_t bits = to_le_bits(v);
        bf.write(reinterpret_cast<const char*>(&bits), 8);
    }
}

Model load_checkpoint(const std::string& path_stem) {
    std::ifstream jf(path_stem + ".json");
    if (!jf) throw io_error("cannot read checkpoint metadata " + path_stem + ".json");
    nlohmann::json meta;
    try {
        jf >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw io_error("malformed checkpoint metadata " + path_stem + ".json: " + e.what());
    }
    if (meta.value("format_version", "") != kFormatVersion)
        throw io_error("unsupported checkpoint format_version in " + path_stem + ".json");

    const auto dims = meta.at("layer_dims").get<std::vector<std::size_t>>();
    const std::string act = meta.at("activation").get<std::string>();
    if (act != "tanh" && act != "identity")
        throw io_error("unknown activation '" + act + "' in " + path_stem + ".json");
    Model model(dims, act == "tanh" ? Activation::tanh : Activation::identity);
    if (meta.at("K").get<std::size_t>() != model.param_count())
        throw io_error("checkpoint K disagrees with layer_dims in " + path_stem + ".json");

    std::ifstream bf(path_stem + ".bin", std::ios::binary);
    if (!bf) throw io_error("cannot read checkpoint sidecar " + path_stem + ".bin");
    std::vector<double> theta(model.param_count());
    for (auto& v : theta) {
        std::uint64_t bits;
        if (!bf.read(reinterpret_cast<char*>(&bits), 8))
            throw io_error("checkpoint sidecar " + path_stem + ".bin is truncated");
        v = from_le_bits(bits);
    }
    model.set_theta(std::move(theta));
    return model;
}

std::string provenance_block(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream out;
    out << "# format_version = " << kFormatVersion << "\n";
    for (const auto& [k, v] : kv) out << "# " << k << " = " << v << "\n";
    return out.str();
}

void save_dataset(const Dataset& data, const std::string& path,
                  const std::string& provenance) {
    if (data.samples.empty()) throw domain_error("save_dataset: empty dataset");
    std::ofstream f(path);
    if (!f) throw io_error("cannot write dataset " + path);
    f << provenance;

    const bool classification = data.loss_kind == LossKind::softmax_cross_entropy;
    const std::size_t din = data.samples.front().x.size();
    for (std::size_t i = 0; i < din; ++i) f << (i ? "," : "") << "x" << i;
    if (classification) {
        f << ",label\n";
    } else {
        for (std::size_t i = 0; i < data.samples.front().y.size(); ++i) f << ",y" << i;
        f << "\n";
    }
    for (const auto& s : data.samples) {
        for (std::size_t i = 0; i < s.x.size(); ++i)
            f << (i ? "," : "") << format_double(s.x[i]);
        if (classification) {
            f << "," << s.label;
        } else {
            for (double v : s.y) f << "," << format_double(v);
        }
        f << "\n";
    }
}

Dataset load_dataset(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot read dataset " + path);

    std::string line;
    // skip provenance comments
    do {
        if (!std::getline(f, line)) throw io_error("dataset " + path + " has no header");
    } while (!line.empty() && line[0] == '#');

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) header.push_back(col);
    }
    std::size_t din = 0;
    while (din < header.size() && header[din] == "x" + std::to_string(din)) ++din;
    if (din == 0) throw io_error("dataset " + path + ": header must start with x0");
    const bool classification = din < header.size() && header[din] == "label";
    const std::size_t dout = classification ? 0 : header.size() - din;
    if (!classification)
        for (std::size_t i = 0; i < dout; ++i)
            if (header[din + i] != "y" + std::to_string(i))
                throw io_error("dataset " + path + ": malformed target columns");

    Dataset data;
    data.loss_kind =
        classification ? LossKind::softmax_cross_entropy : LossKind::squared_error;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ss, cell, ',')) {
            try {
                cells.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw io_error("dataset " + path + ": bad number '" + cell + "' on line " +
                               std::to_string(lineno));
            }
        }
        if (cells.size() != header.size())
            throw io_error("dataset " + path + ": wrong column count on line " +
                           std::to_string(lineno));
        Sample s;
        s.x.assign(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(din));
        if (classification) {
            s.label = static_cast<int>(cells[din]);
        } else {
            s.y.assign(cells.begin() + static_cast<std::ptrdiff_t>(din), cells.end());
        }
        data.samples.push_back(std::move(s));
    }
    if (data.samples.empty()) throw io_error("dataset " + path + " has no rows");
    return data;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot write " + path);
    f << content;
}

}  // namespace gradgeom::io
