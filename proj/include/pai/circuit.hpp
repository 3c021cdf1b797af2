#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pai/statevector.hpp"

namespace pai {

/// exp(-i angle/2 G). Fixed gates are not subject to angle discretisation.
struct RotationGate {
    PauliString generator;
    double angle = 0.0;
    bool parametrised = true;
};

/// Ordered gate list acting on |0...0>.
struct Circuit {
    int num_qubits = 0;
    std::vector<RotationGate> gates;

    std::size_t parametrised_count() const {
        std::size_t n = 0;
        for (const auto& g : gates) {
            n += g.parametrised ? 1 : 0;
        }
        return n;
    }

    /// Angles of the parametrised gates in circuit order.
    std::vector<double> parametrised_angles() const {
        std::vector<double> out;
        out.reserve(gates.size());
        for (const auto& g : gates) {
            if (g.parametrised) {
                out.push_back(g.angle);
            }
        }
        return out;
    }

    /// Copy with the parametrised angles replaced in order.
    Circuit with_angles(std::span<const double> angles) const {
        if (angles.size() != parametrised_count()) {
            throw StructuralError("Circuit::with_angles: expected one angle per parametrised gate");
        }
        Circuit out = *this;
        std::size_t j = 0;
        for (auto& g : out.gates) {
            if (g.parametrised) {
                g.angle = angles[j++];
            }
        }
        return out;
    }
};

template <typename Scalar = double>
void apply_circuit(BasicStatevector<Scalar>& state, const Circuit& circuit) {
    for (const auto& g : circuit.gates) {
        apply_rotation(state, g.generator, static_cast<Scalar>(g.angle));
    }
}

/// Runs the circuit on |0...0>, substituting `angles` for the parametrised gates.
template <typename Scalar = double>
BasicStatevector<Scalar> simulate(const Circuit& circuit, std::span<const double> angles) {
    if (angles.size() != circuit.parametrised_count()) {
        throw StructuralError("simulate: expected one angle per parametrised gate");
    }
    BasicStatevector<Scalar> state(circuit.num_qubits);
    std::size_t j = 0;
    for (const auto& g : circuit.gates) {
        const double angle = g.parametrised ? angles[j++] : g.angle;
        apply_rotation(state, g.generator, static_cast<Scalar>(angle));
    }
    return state;
}

template <typename Scalar = double>
BasicStatevector<Scalar> simulate(const Circuit& circuit) {
    BasicStatevector<Scalar> state(circuit.num_qubits);
    apply_circuit(state, circuit);
    return state;
}

}  // namespace pai
