#pragma once

#include "twobridge/knot.hpp"

#include <optional>
#include <string>

namespace twobridge {

// Resolves the cache directory: the CONCORDANCE_CACHE environment variable,
// when set and non-empty, overrides the --cache flag value.  An empty
// result disables caching.
std::string resolved_cache_dir(const std::string& flag_dir);

// Looks up the stored report JSON for a knot.  A document is only returned
// after revalidation: it must parse, carry the same p and q, and its d
// table must realise the branched-cover correction terms recomputed from
// the recursion.  Anything stale or corrupt is treated as a miss.
std::optional<std::string> cache_lookup(const std::string& dir,
                                        const TwoBridgeKnot& knot);

// Stores a report document (written to a temporary file and renamed, so
// concurrent writers of the same knot never leave a torn file).
void cache_store(const std::string& dir, const TwoBridgeKnot& knot,
                 const std::string& report_json);

} // namespace twobridge
