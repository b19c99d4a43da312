# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Kummer series over an array of arguments and the
Numerov march. Signatures mirror ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef extern from "complex.h":
    double cabs(double complex)


def kummer_series(double complex mu, double complex nu, z, double rel_tol, long max_terms):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    cdef Py_ssize_t npts = zz.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(npts, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nterms = np.empty(npts, dtype=np.int64)
    cdef Py_ssize_t i
    cdef long n
    cdef double complex term, total, zi
    cdef double az
    for i in range(npts):
        zi = zz[i]
        az = cabs(zi)
        term = 1.0
        total = 1.0
        n = 0
        while True:
            term = term * (mu + n) / (nu + n) * zi / (n + 1)
            total = total + term
            n += 1
            if cabs(term) <= rel_tol * cabs(total) and n >= az:
                break
            if n >= max_terms:
                n = -1
                break
        out[i] = total
        nterms[i] = n
    return out, nterms


def numerov_march(f, double h, double psi0, double psi1, double big=1e150):
    # summed form: u = (1 - c f) psi, du = u[i+1] - u[i] += h^2 f psi,
    # which keeps roundoff from growing with the step count
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ff = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t n = ff.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] psi = np.empty(n, dtype=np.float64)
    cdef double c = h * h / 12.0
    cdef double hh = h * h
    cdef double u, du
    cdef Py_ssize_t i, j
    cdef long renorm = 0
    psi[0] = psi0
    if n > 1:
        psi[1] = psi1
    if n < 3:
        return psi, renorm
    u = (1.0 - c * ff[1]) * psi1
    du = u - (1.0 - c * ff[0]) * psi0
    for i in range(1, n - 1):
        du = du + hh * ff[i] * psi[i]
        u = u + du
        psi[i + 1] = u / (1.0 - c * ff[i + 1])
        if fabs(psi[i + 1]) > big:
            for j in range(i + 2):
                psi[j] = psi[j] / big
            u = u / big
            du = du / big
            renorm += 1
    return psi, renorm
