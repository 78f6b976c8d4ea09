#include "bmarl/serialize.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace bmarl {

namespace {
constexpr const char* kCheckpointMagic = "BMARL-CKPT v1";
}

void write_checkpoint(const std::string& path, const nlohmann::json& metadata,
                      const std::map<std::string, const nn::Vec*>& tensors) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    const std::string meta = metadata.dump();
    os << kCheckpointMagic << "\n";
    const uint64_t meta_len = meta.size();
    os.write(reinterpret_cast<const char*>(&meta_len), 8);
    os.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    const uint64_t count = tensors.size();
    os.write(reinterpret_cast<const char*>(&count), 8);
    for (const auto& [name, vec] : tensors) {
        const uint64_t name_len = name.size();
        os.write(reinterpret_cast<const char*>(&name_len), 8);
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        const uint64_t n = vec->size();
        os.write(reinterpret_cast<const char*>(&n), 8);
        os.write(reinterpret_cast<const char*>(vec->data()), static_cast<std::streamsize>(n * 8));
    }
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

nlohmann::json read_checkpoint(const std::string& path, std::map<std::string, nn::Vec>& tensors) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint '" + path + "'");
    std::string line;
    if (!std::getline(is, line) || line != kCheckpointMagic) {
        throw std::runtime_error("'" + path + "' is not a " + kCheckpointMagic + " file");
    }
    auto read_u64 = [&is, &path]() {
        uint64_t v = 0;
        is.read(reinterpret_cast<char*>(&v), 8);
        if (!is) throw std::runtime_error("checkpoint '" + path + "' truncated");
        return v;
    };
    const uint64_t meta_len = read_u64();
    std::string meta(meta_len, '\0');
    is.read(meta.data(), static_cast<std::streamsize>(meta_len));
    if (!is) throw std::runtime_error("checkpoint '" + path + "' truncated");
    const uint64_t count = read_u64();
    tensors.clear();
    for (uint64_t i = 0; i < count; ++i) {
        const uint64_t name_len = read_u64();
        std::string name(name_len, '\0');
        is.read(name.data(), static_cast<std::streamsize>(name_len));
        const uint64_t n = read_u64();
        nn::Vec v(n);
        is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * 8));
        if (!is) throw std::runtime_error("checkpoint '" + path + "' truncated");
        tensors.emplace(std::move(name), std::move(v));
    }
    return nlohmann::json::parse(meta);
}

nlohmann::json read_checkpoint_metadata(const std::string& path) {
    std::map<std::string, nn::Vec> tensors;
    return read_checkpoint(path, tensors);
}

void restore_params(const nn::ParamList& params, const std::map<std::string, nn::Vec>& tensors,
                    const std::string& prefix) {
    for (const auto& p : params) {
        const auto it = tensors.find(prefix + p.name);
        if (it == tensors.end()) {
            throw std::runtime_error("checkpoint is missing tensor '" + prefix + p.name + "'");
        }
        if (it->second.size() != p.tensor->size()) {
            throw std::runtime_error("checkpoint tensor '" + prefix + p.name + "' has wrong size");
        }
        p.tensor->w = it->second;
    }
}

std::map<std::string, const nn::Vec*> collect_tensors(const nn::ParamList& params,
                                                      const std::string& prefix) {
    std::map<std::string, const nn::Vec*> out;
    for (const auto& p : params) out.emplace(prefix + p.name, &p.tensor->w);
    return out;
}

}  // namespace bmarl
