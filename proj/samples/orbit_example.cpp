// Minimal library use: load a table, bounce, and label it.
#include <sympb/sympb.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace sympb;
    const DomainSpec spec = argc > 1 ? load_domain_spec(argv[1]) : fourier_spec("trefoil", 1.0, {0.0, 0.0, 0.1});
    const Domain d = make_domain(spec);

    const Configuration c = orbit(d, PhasePoint(0.0, 1.0), 1000);
    std::cout << "rotation number " << rotation_number(c) << ", max residual " << c.max_residual() << "\n";

    const auto report = run_report(d, d.name());
    std::cout << report.text();
}
