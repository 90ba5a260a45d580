"""Gromov width of Gr(k,n) from two independently checked bounds.

Run: python demos/width_certificates.py
"""
from gromov_width.certificates import certificate_checks, grassmannian_width_certificate
from gromov_width.schubert import BoxContext

cert = grassmannian_width_certificate(BoxContext(2, 5))
lo, up = cert.lower_reason, cert.upper_reason
print("lower bound:", cert.lower, " isotropy weights at", lo["fixed_point"], "are", lo["isotropy_weights"])
print("upper bound:", cert.upper, " invariant of", up["classes"], "in degree", up["degree"], "is", up["invariant_value"])
for check in certificate_checks(cert):
    print(f"  [{'PASS' if check['pass'] else 'FAIL'}] {check['name']}")

# The same check across every Grassmannian up to C^8.
table = {}
for n in range(2, 9):
    for k in range(1, n):
        c = grassmannian_width_certificate(BoxContext(k, n))
        table[(k, n)] = (c.lower, c.upper)
print("all widths exactly one:", all(lo == up == 1 for lo, up in table.values()), f"({len(table)} cases)")
