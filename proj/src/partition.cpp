#include "dnastore/partition.hpp"

#include <fstream>

#include "json.hpp"

#include "dnastore/ecc.hpp"
#include "dnastore/rng.hpp"

namespace dnastore {

const char* const kDefaultFwdPrimer = "ACGCTAGTCATGCAGTACTG";
const char* const kDefaultRevPrimer = "TGCATCGATCGTAGCTAGCA";

std::string intra_index(int column) {
    if (column < 0 || column >= EccConfig::n)
        fail(ErrorCode::bounds, "intra index out of range: " + std::to_string(column));
    std::string s;
    s.push_back("ACGT"[column / 4]);
    s.push_back("ACGT"[column % 4]);
    return s;
}

std::optional<int> intra_index_value(std::string_view s) {
    if (s.size() != 2) return std::nullopt;
    auto hi = version_from_base(s[0]);
    auto lo = version_from_base(s[1]);
    if (!hi || !lo) return std::nullopt;
    int v = *hi * 4 + *lo;
    if (v >= EccConfig::n) return std::nullopt;
    return v;
}

Partition::Partition(PartitionManifest manifest)
    : manifest_(std::move(manifest)),
      layout_(manifest_.layout()),
      tree_(IndexTree::build(TreeConfig{manifest_.tree_depth, manifest_.tree_seed})) {
    if (manifest_.fwd_primer.size() != PartitionLayout::primer_len ||
        manifest_.rev_primer.size() != PartitionLayout::primer_len)
        fail(ErrorCode::invalid_argument, "primers must be 20 bases");
    if (manifest_.block_count > tree_.leaf_count())
        fail(ErrorCode::invalid_argument, "block count exceeds tree capacity");
    if (manifest_.version_counts.size() < manifest_.block_count)
        manifest_.version_counts.resize(manifest_.block_count, 1);
    for (std::uint64_t b = 0; b < manifest_.block_count; ++b)
        index_to_block_.emplace(tree_.leaf_index(b).str(), b);
}

Bytes Partition::randomize_unit(std::uint64_t block_no, int version, const Bytes& data256) const {
    if (data256.size() != kBlockBytes)
        fail(ErrorCode::invalid_argument, "block payload must be 256 bytes, got " + std::to_string(data256.size()));
    Bytes record = data256;
    record.resize(EccConfig::unit_bytes, 0); // zero padding, then whitened below
    std::uint64_t subseed = derive_seed(manifest_.randomizer_seed, block_no, static_cast<std::uint64_t>(version));
    return randomize(record, subseed);
}

Bytes Partition::derandomize_unit(std::uint64_t block_no, int version, const Bytes& record) const {
    if (record.size() != EccConfig::unit_bytes)
        fail(ErrorCode::invalid_argument, "unit record must be 264 bytes");
    std::uint64_t subseed = derive_seed(manifest_.randomizer_seed, block_no, static_cast<std::uint64_t>(version));
    Bytes plain = randomize(record, subseed);
    plain.resize(kBlockBytes);
    return plain;
}

std::vector<DnaString> Partition::build_strands(std::uint64_t block_no, int version, const Bytes& data) const {
    if (block_no >= tree_.leaf_count())
        fail(ErrorCode::bounds, "block " + std::to_string(block_no) + " outside the tree");
    if (version < 0 || version >= PartitionLayout::version_slots)
        fail(ErrorCode::bounds, "version " + std::to_string(version) + " exceeds the " +
                                    std::to_string(PartitionLayout::version_slots) + " version slots");
    UnitMatrix unit = rs_encode_unit(randomize_unit(block_no, version, data));

    const std::string index = tree_.leaf_index(block_no).str();
    std::vector<DnaString> strands;
    strands.reserve(EccConfig::n);
    for (int c = 0; c < EccConfig::n; ++c) {
        Bytes column_bytes(24);
        for (int b = 0; b < 24; ++b)
            column_bytes[b] = static_cast<std::uint8_t>((unit.columns[c][2 * b] << 4) | unit.columns[c][2 * b + 1]);
        std::string s;
        s.reserve(layout_.strand_len());
        s += manifest_.fwd_primer.str();
        s += 'A';
        s += index;
        s += version_base(version);
        s += intra_index(c);
        s += map_bits_to_bases(column_bytes).str();
        s += manifest_.rev_primer.str();
        strands.push_back(DnaString::from_text(s));
    }
    return strands;
}

ParseResult Partition::parse_strand(const DnaString& s) const {
    ParseResult r;
    const auto& text = s.str();
    if (static_cast<int>(text.size()) != layout_.strand_len()) {
        r.reject_reason = "bad length " + std::to_string(text.size());
        return r;
    }
    if (text.compare(0, PartitionLayout::primer_len, manifest_.fwd_primer.str()) != 0) {
        r.reject_reason = "wrong forward primer";
        return r;
    }
    if (text.compare(layout_.rev_offset(), PartitionLayout::primer_len, manifest_.rev_primer.str()) != 0) {
        r.reject_reason = "wrong reverse primer";
        return r;
    }
    if (text[layout_.sync_offset()] != 'A') {
        r.reject_reason = "missing sync base";
        return r;
    }
    auto block = block_of_index(std::string_view(text).substr(layout_.unit_index_offset(), layout_.unit_index_len()));
    if (!block) {
        r.reject_reason = "unknown unit index";
        return r;
    }
    auto version = version_from_base(text[layout_.version_offset()]);
    if (!version) {
        r.reject_reason = "bad version base";
        return r;
    }
    auto column = intra_index_value(std::string_view(text).substr(layout_.intra_offset(), PartitionLayout::intra_index_len));
    if (!column) {
        r.reject_reason = "bad intra index";
        return r;
    }
    r.ok = true;
    r.fields.block_no = *block;
    r.fields.version = *version;
    r.fields.column = *column;
    r.fields.payload = s.substr(layout_.payload_offset(), PartitionLayout::payload_len);
    return r;
}

DnaString Partition::block_address(std::uint64_t block_no, int version) const {
    if (version < 0 || version >= PartitionLayout::version_slots)
        fail(ErrorCode::bounds, "version out of range");
    std::string s = "A" + tree_.leaf_index(block_no).str();
    s.push_back(version_base(version));
    return DnaString::from_text(s);
}

DnaString Partition::elongated_fwd(std::uint64_t block_no, int levels) const {
    return elongate_primer(manifest_.fwd_primer, tree_, block_no, levels);
}

std::optional<std::uint64_t> Partition::block_of_index(std::string_view index) const {
    auto it = index_to_block_.find(std::string(index));
    if (it == index_to_block_.end()) return std::nullopt;
    return it->second;
}

PrimerReport validate_primer_pair(const DnaString& fwd, const DnaString& rev, const PrimerLibrary& library) {
    PrimerReport report;
    auto flag = [&](const std::string& msg) {
        report.ok = false;
        report.failures.push_back(msg);
    };
    auto melting = [](const DnaString& p) {
        return 4.0 * static_cast<double>(p.gc_count()) + 2.0 * static_cast<double>(p.size() - p.gc_count());
    };
    auto check_one = [&](const char* name, const DnaString& p) {
        if (p.size() != PartitionLayout::primer_len) {
            flag(std::string(name) + ": length " + std::to_string(p.size()) + " != 20");
            return;
        }
        double gc = p.gc_fraction();
        if (gc < library.gc_low || gc > library.gc_high)
            flag(std::string(name) + ": GC fraction " + std::to_string(gc) + " outside bounds");
        if (p.max_homopolymer_run() > 3)
            flag(std::string(name) + ": homopolymer run longer than 3");
        for (const auto& admitted : library.pairs) {
            for (const DnaString* q : {&admitted.first, &admitted.second}) {
                if (q->size() == p.size() && hamming_distance(p.view(), q->view()) < library.min_pairwise_hamming)
                    flag(std::string(name) + ": too close to an admitted primer (distance " +
                         std::to_string(hamming_distance(p.view(), q->view())) + ")");
            }
        }
    };
    check_one("fwd", fwd);
    check_one("rev", rev);
    if (fwd.size() == rev.size() && hamming_distance(fwd.view(), rev.view()) < library.min_pairwise_hamming)
        flag("fwd/rev mutual distance below threshold");
    report.fwd_melting_c = melting(fwd);
    report.rev_melting_c = melting(rev);
    return report;
}

std::string manifest_to_json(const PartitionManifest& m) {
    nlohmann::json j;
    j["format"] = "dnastore-manifest";
    j["version"] = 1;
    PartitionLayout layout = m.layout();
    j["layout"] = {{"strand_len", layout.strand_len()},
                   {"primer_len", PartitionLayout::primer_len},
                   {"sync_len", PartitionLayout::sync_len},
                   {"unit_index_len", layout.unit_index_len()},
                   {"version_len", PartitionLayout::version_len},
                   {"intra_index_len", PartitionLayout::intra_index_len},
                   {"payload_len", PartitionLayout::payload_len},
                   {"version_slots", PartitionLayout::version_slots}};
    j["fwd_primer"] = m.fwd_primer.str();
    j["rev_primer"] = m.rev_primer.str();
    j["tree"] = {{"depth", m.tree_depth}, {"seed", m.tree_seed}};
    j["randomizer_seed"] = m.randomizer_seed;
    j["block_count"] = m.block_count;
    j["file_size"] = m.file_size;
    nlohmann::json versions = nlohmann::json::object();
    for (std::uint64_t b = 0; b < m.version_counts.size(); ++b)
        if (m.version_counts[b] > 1) versions[std::to_string(b)] = m.version_counts[b];
    j["block_versions"] = versions;
    return j.dump(2) + "\n";
}

PartitionManifest manifest_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse, std::string("manifest: ") + e.what());
    }
    try {
        if (j.value("format", "") != "dnastore-manifest")
            fail(ErrorCode::parse, "manifest: missing format marker");
        PartitionManifest m;
        m.fwd_primer = DnaString::from_text(j.at("fwd_primer").get<std::string>());
        m.rev_primer = DnaString::from_text(j.at("rev_primer").get<std::string>());
        m.tree_depth = j.at("tree").at("depth").get<int>();
        m.tree_seed = j.at("tree").at("seed").get<std::uint64_t>();
        m.randomizer_seed = j.at("randomizer_seed").get<std::uint64_t>();
        m.block_count = j.at("block_count").get<std::uint64_t>();
        m.file_size = j.at("file_size").get<std::uint64_t>();
        m.version_counts.assign(m.block_count, 1);
        for (auto& [key, value] : j.at("block_versions").items()) {
            std::uint64_t b = std::stoull(key);
            if (b >= m.block_count) fail(ErrorCode::parse, "manifest: versioned block " + key + " out of range");
            int v = value.get<int>();
            if (v < 1 || v > PartitionLayout::version_slots)
                fail(ErrorCode::parse, "manifest: version count " + std::to_string(v) + " out of range");
            m.version_counts[b] = static_cast<std::uint8_t>(v);
        }
        PartitionLayout layout = m.layout();
        if (j.at("layout").at("strand_len").get<int>() != layout.strand_len())
            fail(ErrorCode::parse, "manifest: strand_len inconsistent with tree depth");
        return m;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse, std::string("manifest: ") + e.what());
    }
}

PartitionManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open manifest file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return manifest_from_json(text);
}

void save_manifest(const PartitionManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write manifest file: " + path);
    out << manifest_to_json(manifest);
    if (!out) fail(ErrorCode::io, "failed writing manifest file: " + path);
}

} // namespace dnastore
