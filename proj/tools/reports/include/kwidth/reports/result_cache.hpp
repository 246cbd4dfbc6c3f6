#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace kwidth::reports {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// One file per key under a directory. Writes go to a temporary file that is
/// renamed into place, so concurrent writers never expose partial entries.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);

  std::optional<std::string> load(std::string_view key) const;
  void store(std::string_view key, std::string_view payload) const;
  std::filesystem::path path_for(std::string_view key) const;
  const std::filesystem::path& directory() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace kwidth::reports
