#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "brickvm/support/bytes.hpp"

namespace brickvm::zip {

class ZipError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Entries = std::map<std::string, Bytes>;

/// Reads every file entry of a zip archive (stored or deflated, no zip64,
/// no encryption). Directory entries are skipped.
Entries read(ByteView archive);

/// Writes entries in name order with deflate, fixed timestamps and no extra
/// fields, so equal inputs always give byte-identical archives.
Bytes write(const Entries& entries);

}  // namespace brickvm::zip
