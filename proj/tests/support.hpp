#pragma once

#include "relaysched/io/config.hpp"

#include <string>

namespace support {

inline std::string config_path(const std::string& name)
{
    return std::string(RELAYSCHED_SOURCE_DIR) + "/configs/" + name;
}

inline relaysched::io::ConfigDocument load(const std::string& name)
{
    return relaysched::io::load_config_file(config_path(name));
}

inline double rel_err(double got, double want)
{
    return got == want ? 0.0 : (got - want) / want;
}

} // namespace support
