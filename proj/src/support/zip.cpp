#include "brickvm/support/zip.hpp"

#include <zlib.h>

#include <cstring>

namespace brickvm::zip {
namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
// 1980-01-01 00:00, the DOS epoch.
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

std::uint16_t u16(ByteView d, std::size_t off) {
    if (off + 2 > d.size()) throw ZipError("truncated archive");
    return static_cast<std::uint16_t>(d[off] | (d[off + 1] << 8));
}

std::uint32_t u32(ByteView d, std::size_t off) {
    if (off + 4 > d.size()) throw ZipError("truncated archive");
    return static_cast<std::uint32_t>(d[off]) | (static_cast<std::uint32_t>(d[off + 1]) << 8) |
           (static_cast<std::uint32_t>(d[off + 2]) << 16) | (static_cast<std::uint32_t>(d[off + 3]) << 24);
}

void put16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

Bytes inflate_raw(ByteView src, std::size_t expected) {
    // One spare byte so a stream longer than advertised is detected.
    Bytes out(expected + 1);
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw ZipError("inflateInit2 failed");
    zs.next_in = const_cast<Bytef*>(src.data());
    zs.avail_in = static_cast<uInt>(src.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    auto produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected) throw ZipError("corrupt deflate stream");
    out.resize(expected);
    return out;
}

Bytes deflate_raw(ByteView src) {
    z_stream zs{};
    if (deflateInit2(&zs, 6, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw ZipError("deflateInit2 failed");
    Bytes out(deflateBound(&zs, static_cast<uLong>(src.size())));
    zs.next_in = const_cast<Bytef*>(src.data());
    zs.avail_in = static_cast<uInt>(src.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    out.resize(zs.total_out);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw ZipError("deflate failed");
    return out;
}

std::uint32_t crc_of(ByteView data) {
    return static_cast<std::uint32_t>(crc32(0L, data.data(), static_cast<uInt>(data.size())));
}

}  // namespace

Entries read(ByteView archive) {
    if (archive.size() < 22) throw ZipError("not a zip archive");
    std::size_t eocd = std::string::npos;
    std::size_t lowest = archive.size() > 22 + 65535 ? archive.size() - 22 - 65535 : 0;
    for (std::size_t pos = archive.size() - 22 + 1; pos-- > lowest;) {
        if (u32(archive, pos) == kEndSig) {
            eocd = pos;
            break;
        }
    }
    if (eocd == std::string::npos) throw ZipError("end of central directory not found");

    std::uint16_t count = u16(archive, eocd + 10);
    std::uint32_t cd_offset = u32(archive, eocd + 16);
    if (cd_offset == 0xFFFFFFFFu || count == 0xFFFF) throw ZipError("zip64 archives are not supported");

    Entries entries;
    std::size_t pos = cd_offset;
    for (std::uint16_t i = 0; i < count; ++i) {
        if (u32(archive, pos) != kCentralSig) throw ZipError("bad central directory entry");
        std::uint16_t flags = u16(archive, pos + 8);
        std::uint16_t method = u16(archive, pos + 10);
        std::uint32_t crc = u32(archive, pos + 16);
        std::uint32_t csize = u32(archive, pos + 20);
        std::uint32_t usize = u32(archive, pos + 24);
        std::uint16_t name_len = u16(archive, pos + 28);
        std::uint16_t extra_len = u16(archive, pos + 30);
        std::uint16_t comment_len = u16(archive, pos + 32);
        std::uint32_t local = u32(archive, pos + 42);
        if (pos + 46 + name_len > archive.size()) throw ZipError("truncated archive");
        std::string name(reinterpret_cast<const char*>(archive.data() + pos + 46), name_len);
        pos += 46u + name_len + extra_len + comment_len;

        if (flags & 1u) throw ZipError("encrypted entry: " + name);
        if (!name.empty() && name.back() == '/') continue;

        if (u32(archive, local) != kLocalSig) throw ZipError("bad local header: " + name);
        std::size_t data = local + 30u + u16(archive, local + 26) + u16(archive, local + 28);
        if (data + csize > archive.size()) throw ZipError("truncated entry: " + name);
        ByteView raw = archive.subspan(data, csize);

        Bytes content;
        if (method == 0) {
            if (csize != usize) throw ZipError("size mismatch: " + name);
            content.assign(raw.begin(), raw.end());
        } else if (method == 8) {
            content = inflate_raw(raw, usize);
        } else {
            throw ZipError("unsupported compression method " + std::to_string(method) + ": " + name);
        }
        if (crc_of(content) != crc) throw ZipError("crc mismatch: " + name);
        entries.insert_or_assign(std::move(name), std::move(content));
    }
    return entries;
}

Bytes write(const Entries& entries) {
    Bytes out;
    Bytes central;
    for (const auto& [name, content] : entries) {
        Bytes packed = deflate_raw(content);
        std::uint32_t crc = crc_of(content);
        auto offset = static_cast<std::uint32_t>(out.size());

        put32(out, kLocalSig);
        put16(out, 20);
        put16(out, 1u << 11);  // UTF-8 names
        put16(out, 8);
        put16(out, kDosTime);
        put16(out, kDosDate);
        put32(out, crc);
        put32(out, static_cast<std::uint32_t>(packed.size()));
        put32(out, static_cast<std::uint32_t>(content.size()));
        put16(out, static_cast<std::uint16_t>(name.size()));
        put16(out, 0);
        out.insert(out.end(), name.begin(), name.end());
        out.insert(out.end(), packed.begin(), packed.end());

        put32(central, kCentralSig);
        put16(central, 20);
        put16(central, 20);
        put16(central, 1u << 11);
        put16(central, 8);
        put16(central, kDosTime);
        put16(central, kDosDate);
        put32(central, crc);
        put32(central, static_cast<std::uint32_t>(packed.size()));
        put32(central, static_cast<std::uint32_t>(content.size()));
        put16(central, static_cast<std::uint16_t>(name.size()));
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put32(central, 0);
        put32(central, offset);
        central.insert(central.end(), name.begin(), name.end());
    }
    auto cd_offset = static_cast<std::uint32_t>(out.size());
    out.insert(out.end(), central.begin(), central.end());
    put32(out, kEndSig);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint16_t>(entries.size()));
    put16(out, static_cast<std::uint16_t>(entries.size()));
    put32(out, static_cast<std::uint32_t>(central.size()));
    put32(out, cd_offset);
    put16(out, 0);
    return out;
}

}  // namespace brickvm::zip
