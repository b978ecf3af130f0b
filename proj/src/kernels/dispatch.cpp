#include <cstdlib>
#include <cstring>

#include "stpp/kernels/kernels.hpp"

namespace stpp::kernels {

const KernelTable& avx2_table_unchecked() noexcept;

const KernelTable* avx2_table() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    static const bool supported = __builtin_cpu_supports("avx2");
    if (supported) return &avx2_table_unchecked();
#endif
    return nullptr;
}

const KernelTable& active() noexcept {
    static const KernelTable* chosen = [] {
        const char* isa = std::getenv("STPP_ISA");
        if (isa != nullptr && std::strcmp(isa, "scalar") == 0) return &scalar_table();
        const KernelTable* simd = avx2_table();
        return simd != nullptr ? simd : &scalar_table();
    }();
    return *chosen;
}

}  // namespace stpp::kernels
