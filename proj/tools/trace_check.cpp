#include "polystab/errors.hpp"
#include "polystab/trace.hpp"

#include <iostream>

int main(int argc, char** argv) {
    const std::string root = argc > 1 ? argv[1] : ".";
    try {
        const auto r = polystab::trace::trace_check(root);
        std::cout << "trace ok: " << r.entries.size() << " relations, " << r.out_of_scope.size()
                  << " out-of-scope items, " << r.tests_known << " tests\n";
        return 0;
    } catch (const polystab::Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}
