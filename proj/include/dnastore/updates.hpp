#ifndef DNASTORE_UPDATES_HPP
#define DNASTORE_UPDATES_HPP

#include <cstdint>

#include "dnastore/codec.hpp"

namespace dnastore {

/// Delete-then-insert edit applied to a block at decode time. Stored as an
/// ordinary 256-byte block payload in one of the block's version slots:
/// byte 0 = del_start, 1 = del_len, 2 = ins_pos, 3 = ins_len,
/// bytes 4..4+ins_len = the inserted bytes, remainder zero.
struct UpdatePatch {
    std::uint8_t del_start = 0;
    std::uint8_t del_len = 0;
    std::uint8_t ins_pos = 0; // position after the deletion is applied
    Bytes ins_bytes;
};

constexpr std::size_t kMaxInsertBytes = 252;

Bytes serialize_patch(const UpdatePatch& p);
UpdatePatch deserialize_patch(const Bytes& record);

/// Delete block[del_start, del_start+del_len), then insert ins_bytes at
/// ins_pos. The result length is old - del_len + ins_len and must stay
/// within 256 bytes.
Bytes apply_patch(const Bytes& block, const UpdatePatch& p);

struct VersionChain {
    Bytes original;
    std::vector<UpdatePatch> patches; // versions 1..3, in order
};

/// Fold apply_patch over the patches in version order.
Bytes resolve_chain(const VersionChain& chain);

} // namespace dnastore

#endif
