#include "twobridge/cache.hpp"

#include "twobridge/lens_d.hpp"
#include "twobridge/report.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace twobridge {

namespace {

std::filesystem::path cache_file(const std::string& dir,
                                 const TwoBridgeKnot& knot) {
  return std::filesystem::path(dir) /
         ("K_" + std::to_string(knot.p()) + "_" + std::to_string(knot.q()) +
          ".json");
}

} // namespace

std::string resolved_cache_dir(const std::string& flag_dir) {
  const char* env = std::getenv("CONCORDANCE_CACHE");
  if (env != nullptr && env[0] != '\0') return env;
  return flag_dir;
}

std::optional<std::string> cache_lookup(const std::string& dir,
                                        const TwoBridgeKnot& knot) {
  if (dir.empty()) return std::nullopt;
  const auto path = cache_file(dir, knot);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  try {
    const ObstructionReport report = report_from_json(text);
    if (report.p != knot.p() || report.q != knot.q()) return std::nullopt;
    if (static_cast<long>(report.d.size()) != knot.p()) return std::nullopt;
    // Revalidate against the recursion: the cached d table must still
    // realise the correction-term multiset of the branched cover.
    std::vector<Rational> cached = report.d;
    std::sort(cached.begin(), cached.end());
    if (cached != d_branched_cover_multiset(knot)) return std::nullopt;
    return text;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void cache_store(const std::string& dir, const TwoBridgeKnot& knot,
                 const std::string& report_json) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  const auto path = cache_file(dir, knot);
  static std::atomic<unsigned> counter{0};
  const auto tmp = path.string() + ".tmp" +
                   std::to_string(counter.fetch_add(1)) + "." +
                   std::to_string(static_cast<unsigned long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << report_json;
  }
  std::filesystem::rename(tmp, path);
}

} // namespace twobridge
