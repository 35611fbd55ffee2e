#pragma once

#include <string>
#include <vector>

#include "nvsq/dressed.hpp"
#include "nvsq/opspec.hpp"

namespace nvsq {

// Bare spin operators on {|0>, |+1>, |-1>}.
Eigen::Matrix3cd spin_Sz();
Eigen::Matrix3cd spin_Sy();
Eigen::Matrix3cd spin_Sx();

// H = wm d^dag d + H_NV + g cos(phi) Sz (d+d^dag) + g sin(phi) Sy (d+d^dag),
// one mechanical mode, spin in the bare basis.
OperatorSpec bare_hamiltonian(const SystemParams& p);

// Interaction-picture Hamiltonian after the rotating-wave approximation:
// H_I = -delta0 |a><a| - delta1 |b><b| + (gs |c><b| d^dag + gc d |a><b| + h.c.)
// Dressed projectors are expressed in the bare basis. Appends RWA validity
// messages to *warnings when provided.
OperatorSpec interaction_hamiltonian(const DressedFrame& f, const SystemParams& p,
                                     std::vector<std::string>* warnings = nullptr);

// Full two-mode Hamiltonian including the neglected spin-x block, for
// inspection only (the reduced path drops those terms). Couplings
// g_{1s,c} = -/+ g cos(phi) sin/cos(theta), g_{2s,c} with sin(phi).
OperatorSpec two_mode_full_hamiltonian(const DressedFrame& f, const SystemParams& p);

} // namespace nvsq
