#include "qdmnp/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace qdmnp::log {

namespace {
std::atomic<Level> current{Level::warning};
std::mutex sink_mutex;
}  // namespace

void set_level(Level l) { current = l; }
Level level() { return current; }

void warn(std::string_view message) {
    if (current < Level::warning) return;
    std::lock_guard lock(sink_mutex);
    std::clog << "warning: " << message << '\n';
}

void info(std::string_view message) {
    if (current < Level::info) return;
    std::lock_guard lock(sink_mutex);
    std::clog << message << '\n';
}

}  // namespace qdmnp::log
