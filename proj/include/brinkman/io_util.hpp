#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "brinkman/errors.hpp"

namespace brinkman {

/// Write a file atomically: stream into <path>.tmp, then rename over <path>.
/// Interrupted runs never leave torn files behind.
inline void atomic_write(const std::string& path,
                         const std::function<void(std::ostream&)>& fill) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open for writing: " + tmp);
        fill(os);
        os.flush();
        if (!os) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + tmp + " -> " + path + ": " + ec.message());
}

}  // namespace brinkman
