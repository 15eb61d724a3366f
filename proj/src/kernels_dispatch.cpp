#include "bivar/kernels.hpp"

#include <atomic>

#include "bivar/core.hpp"

namespace bivar::kern {
namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* detect() { return avx2_available() ? &avx2_ops() : &scalar_ops(); }

}  // namespace

const Ops& active() {
    const Ops* p = g_active.load(std::memory_order_acquire);
    if (!p) {
        p = detect();
        g_active.store(p, std::memory_order_release);
    }
    return *p;
}

void force(Isa isa) {
    switch (isa) {
        case Isa::Auto:
            g_active.store(detect(), std::memory_order_release);
            return;
        case Isa::Scalar:
            g_active.store(&scalar_ops(), std::memory_order_release);
            return;
        case Isa::Avx2:
            if (!avx2_available())
                throw hypothesis_error("avx2 requested but not supported by this CPU");
            g_active.store(&avx2_ops(), std::memory_order_release);
            return;
    }
}

const char* active_name() { return active().name; }

}  // namespace bivar::kern
