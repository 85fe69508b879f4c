#include <cstdio>

int main() {
    std::puts("dlhim: CLI under construction");
    return 0;
}
