#include <iostream>

#include "qdl/acceptance.hpp"

int main() {
    bool all = true;
    qdl::run_acceptance({}, [&](const qdl::CriterionResult& r) {
        std::cout << qdl::format_result(r) << std::endl;
        all = all && r.pass;
    });
    return all ? 0 : 1;
}
