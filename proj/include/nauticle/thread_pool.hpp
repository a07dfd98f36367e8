#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace nauticle {

/// Particle-decomposition executor: [0, total) is split into contiguous
/// blocks of total/threads particles, one block per thread, and the call
/// returns when every block has finished (the equation barrier). No particle
/// is touched by two threads. With one thread the work runs inline.
class ThreadPool {
public:
    explicit ThreadPool(int threads) : threads_(threads < 1 ? 1 : threads) {}

    int thread_count() const { return threads_; }

    void parallel_blocks(int total, const std::function<void(int block, int begin, int end)>& fn)
        const {
        if (total <= 0) return;
        int blocks = threads_ < total ? threads_ : total;  // cap at particle count
        if (blocks <= 1) {
            fn(0, 0, total);
            return;
        }
        int per_block = (total + blocks - 1) / blocks;
        std::vector<std::exception_ptr> errors(blocks);
        std::vector<std::thread> workers;
        workers.reserve(blocks);
        for (int b = 0; b < blocks; ++b) {
            int begin = b * per_block;
            int end = begin + per_block < total ? begin + per_block : total;
            workers.emplace_back([&, b, begin, end] {
                try {
                    fn(b, begin, end);
                } catch (...) {
                    errors[b] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

private:
    int threads_;
};

}  // namespace nauticle
