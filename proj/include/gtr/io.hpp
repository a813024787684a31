#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtr/model.hpp"
#include "gtr/reconstruct.hpp"

namespace gtr {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Instance file: {"version":1, "n":<int>, "probs":[...], "checksum":"..."}
// The checksum is FNV-1a over the little-endian IEEE-754 bytes of the probs,
// so it pins the exact values rather than any printed representation.
// ---------------------------------------------------------------------------

inline std::string instance_checksum(const std::vector<double>& probs) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](const unsigned char* p, std::size_t len) {
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ull;
        }
    };
    const std::uint64_t n = probs.size();
    mix(reinterpret_cast<const unsigned char*>(&n), sizeof n);
    for (double v : probs) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        mix(reinterpret_cast<const unsigned char*>(&bits), sizeof bits);
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "fnv64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void write_instance(const std::string& path, const ProbabilityString& s) {
    json j;
    j["version"] = 1;
    j["n"] = s.size();
    j["probs"] = s.probs();
    j["checksum"] = instance_checksum(s.probs());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << j.dump(2) << "\n";
}

inline ProbabilityString read_instance(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    json j = json::parse(f, nullptr, true);
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw IoError(path + ": unsupported instance version");
    std::vector<double> probs = j["probs"].get<std::vector<double>>();
    if (j.contains("n") && j["n"].get<std::size_t>() != probs.size())
        throw IoError(path + ": n does not match probs length");
    if (j.contains("checksum") && j["checksum"].get<std::string>() != instance_checksum(probs))
        throw IoError(path + ": checksum mismatch");
    return ProbabilityString(std::move(probs));
}

// ---------------------------------------------------------------------------
// Trace set file (plain): header line
//   #gtr v1 n=<n> delta=<float> seed=<u64> count=<k>
// then one ASCII 0/1 line per trace; an empty line is the empty trace.
// Provenanced sets are JSON Lines: {"bits":"0110","src":[1,3,4,6]}.
// ---------------------------------------------------------------------------

struct TraceSetHeader {
    std::size_t n = 0;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::size_t count = 0;
};

inline std::string format_double(double v) {
    return json(v).dump();  // shortest round-trip representation
}

inline void write_trace_set(const std::string& path, const TraceSetHeader& h,
                            const std::vector<BitVec>& traces) {
    if (traces.size() != h.count) throw IoError("write_trace_set: count mismatch");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << "#gtr v1 n=" << h.n << " delta=" << format_double(h.delta) << " seed=" << h.seed
      << " count=" << h.count << "\n";
    for (const auto& t : traces) f << t.to_string() << "\n";
}

inline std::vector<BitVec> read_trace_set(const std::string& path, TraceSetHeader* header = nullptr) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    std::string line;
    if (!std::getline(f, line)) throw IoError(path + ": empty file");
    TraceSetHeader h;
    {
        std::istringstream ss(line);
        std::string magic, ver, kv;
        ss >> magic >> ver;
        if (magic != "#gtr" || ver != "v1") throw IoError(path + ": bad trace set header");
        while (ss >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw IoError(path + ": bad header field " + kv);
            const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
            if (key == "n") h.n = std::stoull(val);
            else if (key == "delta") h.delta = std::stod(val);
            else if (key == "seed") h.seed = std::stoull(val);
            else if (key == "count") h.count = std::stoull(val);
        }
    }
    std::vector<BitVec> traces;
    traces.reserve(h.count);
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        traces.push_back(BitVec::from_string(line));
    }
    if (traces.size() != h.count) throw IoError(path + ": trace count does not match header");
    if (header) *header = h;
    return traces;
}

inline void write_provenanced_set(const std::string& path,
                                  const std::vector<ProvenancedTrace>& traces) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    for (const auto& t : traces) {
        json j;
        j["bits"] = t.bits.to_string();
        j["src"] = t.sources;
        f << j.dump() << "\n";
    }
}

struct ProvenancedSet {
    std::vector<BitVec> bits;
    std::vector<std::vector<std::uint32_t>> sources;
};

inline ProvenancedSet read_provenanced_set(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    ProvenancedSet set;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        set.bits.push_back(BitVec::from_string(j["bits"].get<std::string>()));
        set.sources.push_back(j["src"].get<std::vector<std::uint32_t>>());
        if (set.sources.back().size() != set.bits.back().size())
            throw IoError(path + ": bits/src length mismatch");
    }
    return set;
}

}  // namespace gtr
