#include "dnastore/updates.hpp"

#include "dnastore/errors.hpp"
#include "dnastore/partition.hpp"

namespace dnastore {

Bytes serialize_patch(const UpdatePatch& p) {
    if (p.ins_bytes.size() > kMaxInsertBytes)
        fail(ErrorCode::patch, "patch inserts " + std::to_string(p.ins_bytes.size()) +
                                   " bytes; at most " + std::to_string(kMaxInsertBytes) + " fit");
    Bytes record(kBlockBytes, 0);
    record[0] = p.del_start;
    record[1] = p.del_len;
    record[2] = p.ins_pos;
    record[3] = static_cast<std::uint8_t>(p.ins_bytes.size());
    std::copy(p.ins_bytes.begin(), p.ins_bytes.end(), record.begin() + 4);
    return record;
}

UpdatePatch deserialize_patch(const Bytes& record) {
    if (record.size() != kBlockBytes)
        fail(ErrorCode::patch, "patch record must be 256 bytes");
    UpdatePatch p;
    p.del_start = record[0];
    p.del_len = record[1];
    p.ins_pos = record[2];
    std::size_t ins_len = record[3];
    if (ins_len > kMaxInsertBytes)
        fail(ErrorCode::patch, "patch record claims " + std::to_string(ins_len) + " inserted bytes");
    p.ins_bytes.assign(record.begin() + 4, record.begin() + 4 + static_cast<std::ptrdiff_t>(ins_len));
    return p;
}

Bytes apply_patch(const Bytes& block, const UpdatePatch& p) {
    const std::size_t del_end = static_cast<std::size_t>(p.del_start) + p.del_len;
    if (del_end > block.size())
        fail(ErrorCode::patch, "deletion [" + std::to_string(p.del_start) + ", " + std::to_string(del_end) +
                                   ") exceeds block length " + std::to_string(block.size()));
    Bytes out(block.begin(), block.begin() + p.del_start);
    out.insert(out.end(), block.begin() + static_cast<std::ptrdiff_t>(del_end), block.end());
    if (p.ins_pos > out.size())
        fail(ErrorCode::patch, "insert position " + std::to_string(p.ins_pos) +
                                   " exceeds post-deletion length " + std::to_string(out.size()));
    out.insert(out.begin() + p.ins_pos, p.ins_bytes.begin(), p.ins_bytes.end());
    if (out.size() > kBlockBytes)
        fail(ErrorCode::patch, "patched block would be " + std::to_string(out.size()) + " bytes; 256 is the cap");
    return out;
}

Bytes resolve_chain(const VersionChain& chain) {
    Bytes current = chain.original;
    int version = 0;
    for (const auto& p : chain.patches) {
        ++version;
        try {
            current = apply_patch(current, p);
        } catch (const Error& e) {
            fail(ErrorCode::patch, "version " + std::to_string(version) + ": " + e.what());
        }
    }
    return current;
}

} // namespace dnastore
