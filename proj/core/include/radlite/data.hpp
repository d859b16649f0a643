#pragma once

#include <string_view>

// Accessors for the data files embedded at build time (see
// cmake/EmbedResource.cmake). The same files are installed under
// share/radlite/ for external consumers.
namespace radlite::data {

std::string_view rads_inventory_json();
std::string_view prompt_table_json();
std::string_view label_sets_json();

}  // namespace radlite::data
