#include "shardsim/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string>

namespace shardsim {

void init_logging_from_env() {
  auto logger = spdlog::stderr_color_mt("shardsim");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("SHARDSIM_LOG");
  if (env == nullptr || *env == '\0') {
    spdlog::set_level(spdlog::level::warn);
    return;
  }
  const std::string value(env);
  auto level = spdlog::level::from_str(value);
  // from_str maps unknown names to "off".
  if (level == spdlog::level::off && value != "off") level = spdlog::level::info;
  spdlog::set_level(level);
}

}  // namespace shardsim
