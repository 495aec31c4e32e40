#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "hqnn/hybrid.hpp"

namespace hqnn {

namespace {

constexpr char kMagic[4] = {'H', 'Q', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("checkpoint: truncated file");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

nlohmann::json config_to_json(const ModelConfig& c) {
    return {
        {"variant", variant_to_string(c.variant)},
        {"in_channels", c.in_channels},
        {"image_size", c.image_size},
        {"n_classes", c.n_classes},
        {"conv_channels", c.conv_channels},
        {"kernel", c.kernel},
        {"hidden", c.hidden},
    };
}

ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.variant = variant_from_string(j.at("variant").get<std::string>());
    c.in_channels = j.at("in_channels").get<int>();
    c.image_size = j.at("image_size").get<int>();
    c.n_classes = j.at("n_classes").get<int>();
    c.conv_channels = j.at("conv_channels").get<std::vector<int>>();
    c.kernel = j.at("kernel").get<int>();
    c.hidden = j.at("hidden").get<int>();
    return c;
}

}  // namespace

void save_checkpoint(const HybridModel& model, const std::filesystem::path& path) {
    HybridModel& m = const_cast<HybridModel&>(model);  // params() is non-const only

    nlohmann::json header = {
        {"config", config_to_json(model.config())},
        {"init_seed", model.init_seed()},
        {"epochs_trained", model.epochs_trained},
    };
    std::string header_str = header.dump();

    // temp + rename keeps the target atomic
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("save_checkpoint: cannot write " + tmp.string());
        out.write(kMagic, 4);
        write_u32(out, kVersion);
        write_u32(out, static_cast<std::uint32_t>(header_str.size()));
        out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
        for (Tensor* p : m.params())
            out.write(reinterpret_cast<const char*>(p->data.data()),
                      static_cast<std::streamsize>(p->data.size() * sizeof(double)));
        if (!out) throw std::runtime_error("save_checkpoint: write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

HybridModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path.string());

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("checkpoint: bad magic bytes");
    std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw FormatError("checkpoint: unsupported version " + std::to_string(version));

    std::uint32_t header_len = read_u32(in);
    std::string header_str(header_len, '\0');
    if (!in.read(header_str.data(), header_len)) throw FormatError("checkpoint: truncated header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_str);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("checkpoint: bad header: ") + e.what());
    }

    HybridModel model(config_from_json(header.at("config")),
                      header.at("init_seed").get<std::uint64_t>());
    model.epochs_trained = header.at("epochs_trained").get<int>();

    for (Tensor* p : model.params())
        if (!in.read(reinterpret_cast<char*>(p->data.data()),
                     static_cast<std::streamsize>(p->data.size() * sizeof(double))))
            throw FormatError("checkpoint: truncated weight block");
    return model;
}

}  // namespace hqnn
