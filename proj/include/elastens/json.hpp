#pragma once

// Single point of inclusion for the vendored nlohmann/json.
#include <json.hpp>
