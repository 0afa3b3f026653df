# Copyright 2026 The QRBM Authors
# SPDX-License-Identifier: Apache-2.0
"""Print H2 STO-3G qubit Hamiltonians (Jordan-Wigner and tapered) at bond length R in Angstrom.

Requires pyscf and openfermion. Usage: python3 generate_h2.py 0.735
"""
import numpy as np, pyscf, openfermion as of
from openfermion.chem import MolecularData
from openfermion.transforms import get_fermion_operator, jordan_wigner
from openfermion import taper_off_qubits, QubitOperator, get_sparse_operator
from pyscf import gto, scf, ao2mo
import sys
R=float(sys.argv[1])
mol=gto.M(atom=f'H 0 0 0; H 0 0 {R}',basis='sto-3g',unit='Angstrom')
mf=scf.RHF(mol).run(verbose=0)
h1=mf.mo_coeff.T@mf.get_hcore()@mf.mo_coeff
eri=ao2mo.restore(1,ao2mo.kernel(mol,mf.mo_coeff),2)
from openfermion.ops.representations import InteractionOperator
from openfermion.chem.molecular_data import spinorb_from_spatial
one,two=spinorb_from_spatial(h1,np.asarray(eri.transpose(0,2,3,1),order='C'))
iop=InteractionOperator(mol.energy_nuc(),one,0.5*two)
qop=jordan_wigner(get_fermion_operator(iop)); qop.compress(1e-12)
E=np.linalg.eigvalsh(get_sparse_operator(qop).toarray())
from pyscf import fci
efci=fci.FCI(mf).kernel()[0]
print('# R',R,'FCI',efci,'JW min eig',E[0], 'pyscf',pyscf.__version__,'of',of.__version__)
def dump(q,n):
    out=[]
    for term,c in sorted(q.terms.items(), key=lambda kv:(len(kv[0]),kv[0])):
        s=['I']*n
        for i,p in term: s[i]=p
        out.append((c.real,''.join(s)))
    return out
for c,s in dump(qop,4): print('%.17g %s'%(c,s))
# tapering: stabilizers Z0Z2, Z1Z3 (spin parity), Z0Z1Z2Z3
stabs=[-1*QubitOperator('Z0 Z2'),-1*QubitOperator('Z1 Z3')]
t=taper_off_qubits(qop,stabs); t.compress(1e-12)
nq=max(i for term in t.terms for i,_ in term)+1
Et=np.linalg.eigvalsh(get_sparse_operator(t,nq).toarray())
print('# tapered n',nq,'min eig',Et[0])
for c,s in dump(t,nq): print('%.17g %s'%(c,s))
