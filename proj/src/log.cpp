#include "hitpred/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace hitpred::log {
namespace {

std::atomic<Level> g_level{Level::info};
std::mutex g_mutex;
Sink g_sink;

const char* level_name(Level l) {
    switch (l) {
        case Level::debug: return "debug";
        case Level::info: return "info";
        case Level::warn: return "warn";
        case Level::error: return "error";
        case Level::off: return "off";
    }
    return "?";
}

}  // namespace

void set_level(Level l) { g_level = l; }
Level level() { return g_level; }

Sink set_sink(Sink sink) {
    std::lock_guard lock(g_mutex);
    Sink prev = std::move(g_sink);
    g_sink = std::move(sink);
    return prev;
}

void write(Level l, std::string_view message) {
    if (l < g_level.load() || l == Level::off) return;
    std::lock_guard lock(g_mutex);
    if (g_sink) {
        g_sink(l, message);
        return;
    }
    std::cerr << "[" << level_name(l) << "] " << message << '\n';
}

}  // namespace hitpred::log
