#include "h2cert/threads.hpp"

#include <stdexcept>
#include <thread>

namespace h2cert {

namespace {
int g_threads = 1;
}

int thread_count() {
    if (g_threads > 0) return g_threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_count(int n) {
    if (n < 0) throw std::invalid_argument("set_thread_count: negative count");
    g_threads = n;
}

}  // namespace h2cert
