"""Regenerate the FCIDUMP fixtures and their reference energies.

Requires PySCF. Run from this directory:

    python3 generate_fixtures.py

Writes one FCIDUMP per molecule (RHF/STO-3G orbitals, no active space) plus
`oracle.json` holding full-CI, active-space CASCI, CISD and HF energies
computed by PySCF, and finite-difference nuclear-derivative operators for H4
in the `h4_derivatives/` directory.
"""

import json
import os

import numpy as np
from pyscf import ao2mo, ci, fci, gto, mcscf, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))

MOLECULES = {
    "h2": [("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 0.735))],
    "h4": [("H", (0.0, 0.0, 1.0 * i)) for i in range(4)],
    "h6": [("H", (0.0, 0.0, 1.0 * i)) for i in range(6)],
    "h8": [("H", (0.0, 0.0, 1.0 * i)) for i in range(8)],
    "lih": [("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.595))],
    "h2o": [
        ("O", (0.0, 0.0, 0.0)),
        ("H", (0.2774, 0.8929, 0.2544)),
        ("H", (0.6068, -0.2383, -0.7169)),
    ],
}


def build(atoms):
    mol = gto.M(atom=atoms, basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    return mol, mf


def mo_integrals(mol, mo):
    h1 = mo.T @ mol.intor("int1e_kin") @ mo + mo.T @ mol.intor("int1e_nuc") @ mo
    eri = ao2mo.restore(1, ao2mo.kernel(mol, mo), mo.shape[1])
    return h1, eri


def fci_roots(h1, eri, norb, nelec, ecore, nroots=1):
    solver = fci.direct_spin1.FCI()
    solver.conv_tol = 1e-12
    solver.max_cycle = 500
    e, _ = solver.kernel(h1, eri, norb, nelec, ecore=ecore, nroots=nroots)
    return np.atleast_1d(e).tolist()


def write(path, h1, eri, norb, nelec, ecore):
    fcidump.from_integrals(path, h1, eri, norb, nelec, nuc=ecore, ms=0, tol=1e-15)


def derivative_operators(atoms, delta=1e-3):
    """Central-difference gradient and diagonal Hessian operators.

    Orbitals at displaced geometries are the reference MOs re-orthonormalized
    (symmetric orthogonalization) in the displaced AO metric, so the operators
    share the reference orbital basis.
    """
    mol0, mf0 = build(atoms)
    c0 = mf0.mo_coeff
    norb = c0.shape[1]

    def integrals_at(coords):
        mol = gto.M(atom=coords, basis="sto-3g", unit="Angstrom", verbose=0)
        s = mol.intor("int1e_ovlp")
        m = c0.T @ s @ c0
        w, v = np.linalg.eigh(m)
        c = c0 @ (v @ np.diag(w ** -0.5) @ v.T)
        h1, eri = mo_integrals(mol, c)
        return mol.energy_nuc(), h1, eri

    base = integrals_at(atoms)
    ops = []
    for a in range(len(atoms)):
        for k in range(3):
            def shifted(step):
                coords = [(sym, list(pos)) for sym, pos in atoms]
                coords[a][1][k] += step
                return integrals_at([(s, tuple(p)) for s, p in coords])

            plus, minus = shifted(delta), shifted(-delta)
            grad = [(p - m) / (2 * delta) for p, m in zip(plus, minus)]
            hess = [(p - 2 * b + m) / delta ** 2 for p, b, m in zip(plus, base, minus)]
            ops.append((f"grad_{a}{'xyz'[k]}", grad))
            ops.append((f"hess_{a}{'xyz'[k]}{'xyz'[k]}", hess))
    return norb, mol0.nelectron, ops


def main():
    oracle = {}
    for name, atoms in MOLECULES.items():
        mol, mf = build(atoms)
        norb = mf.mo_coeff.shape[1]
        nelec = mol.nelectron
        h1, eri = mo_integrals(mol, mf.mo_coeff)
        ecore = mol.energy_nuc()
        write(os.path.join(HERE, f"{name}.fcidump"), h1, eri, norb, nelec, ecore)
        entry = {
            "n_orbitals": norb,
            "n_electrons": nelec,
            "hf_energy": mf.e_tot,
        }
        if norb <= 8:
            entry["fci_energies"] = fci_roots(
                h1, eri, norb, (nelec // 2, nelec // 2), ecore, nroots=3
            )
        if name == "h4":
            myci = ci.CISD(mf)
            myci.conv_tol = 1e-12
            myci.kernel()
            entry["cisd_energy"] = myci.e_tot
        if name == "h2o":
            cas = mcscf.CASCI(mf, 5, 6)
            cas.fcisolver.nroots = 3
            cas.fcisolver.conv_tol = 1e-12
            cas.kernel()
            entry["casci_5o6e_frozen"] = [0, 1]
            entry["casci_5o6e_active"] = [2, 3, 4, 5, 6]
            entry["casci_5o6e_energies"] = np.atleast_1d(cas.e_tot).tolist()
            h1c, ecore_c = cas.get_h1eff()
            eri_c = ao2mo.restore(1, cas.get_h2eff(), 5)
            write(os.path.join(HERE, "h2o_5o6e.fcidump"), h1c, eri_c, 5, 6, ecore_c)
        oracle[name] = entry

    deriv_dir = os.path.join(HERE, "h4_derivatives")
    os.makedirs(deriv_dir, exist_ok=True)
    norb, nelec, ops = derivative_operators(MOLECULES["h4"])
    for label, (ecore, h1, eri) in ops:
        write(os.path.join(deriv_dir, f"{label}.fcidump"), h1, eri, norb, nelec, ecore)
    oracle["h4"]["derivative_operators"] = [label for label, _ in ops]

    with open(os.path.join(HERE, "oracle.json"), "w") as f:
        json.dump(oracle, f, indent=2)


if __name__ == "__main__":
    main()
