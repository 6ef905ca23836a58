"""Tabular reports: constants, the branch -1 comparison and the identity matrix.

The row builders are shared by the command line and the PDF renderer.
"""

from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List

import mpmath

try:
    from reportlab.lib import colors
    from reportlab.lib.pagesizes import letter
    from reportlab.lib.styles import getSampleStyleSheet, ParagraphStyle
    from reportlab.lib.units import inch
    from reportlab.platypus import SimpleDocTemplate, Paragraph, Spacer, Table, TableStyle
    REPORTLAB_AVAILABLE = True
except ImportError:
    REPORTLAB_AVAILABLE = False

import combinatorics
import convergence
from errors import IdentityFailure
from numerics import guarded
from oracle import lambert_w, omega_constant
from series import branch_m1_approx

BRANCH_TABLE_POINTS = ('-0.01', '-0.1', '-0.2', '-0.3', '-1/e')
IDENTITY_ARGUMENTS = (Fraction(1, 3), Fraction(2, 5), Fraction(-1, 2), Fraction(3), Fraction(-5, 7))
DEFAULT_MAX_N = 15


def _point(label: str):
    if label == '-1/e':
        return -1 / mpmath.e
    return mpmath.mpf(label)


def constants_rows() -> List[Dict[str, Any]]:
    """Name, value and defining-equation residual of every tabulated constant."""
    s1 = convergence.sigma1()
    x1 = convergence.improved_real_threshold()
    s_c = convergence.sigma_c()
    a_c = convergence.alpha_c()
    alpha_star, x_star = convergence.x_of_alpha_max()
    radius = convergence.wright_radius()
    omega0 = omega_constant()
    split = 1 / lambert_w(0, 1 / mpmath.e)
    approx = convergence.sigma1_approx()

    return [
        {'name': 'sigma_1', 'value': s1.value, 'residual': s1.residual},
        {'name': 'x_1', 'value': x1.value, 'residual': x1.residual},
        {'name': 'sigma_c', 'value': s_c.value, 'residual': s_c.residual},
        {'name': 'alpha_c', 'value': a_c.value, 'residual': a_c.residual},
        {'name': 'sigma_1_approx', 'value': approx, 'residual': abs(approx - s1.value)},
        {'name': 'alpha_star', 'value': alpha_star, 'residual': mpmath.mpf(0)},
        {'name': 'x_star', 'value': x_star, 'residual': abs(x_star - mpmath.exp(mpmath.exp(-mpmath.pi)))},
        {'name': 'wright_radius', 'value': radius.value, 'residual': radius.residual},
        {'name': 'inv_W_inv_e', 'value': split, 'residual': abs(mpmath.log(split) - 1 / split - 1)},
        {'name': 'omega_0', 'value': omega0, 'residual': abs(omega0 * mpmath.exp(omega0) - 1)},
    ]


def branch_table_rows() -> List[Dict[str, Any]]:
    """W_-1 against its transformed and untransformed approximants."""
    rows = []
    for label in BRANCH_TABLE_POINTS:
        z = _point(label)
        rows.append({
            'z': label,
            'oracle': lambert_w(-1, z),
            'transformed': branch_m1_approx(z, 'transformed'),
            'untransformed': branch_m1_approx(z, 'untransformed'),
        })
    return rows


def identity_matrix(max_n: int = DEFAULT_MAX_N) -> List[Dict[str, Any]]:
    """Run every identity suite up to ``max_n``; one row per suite."""
    suites = []

    def run(name, checks):
        failures = [c['error'] for c in checks if not c['success']]
        suites.append({'suite': name, 'checked': len(checks), 'passed': len(checks) - len(failures),
                       'success': not failures, 'error': failures[0] if failures else ''})

    run('carlitz_riordan', [
        combinatorics.check_carlitz_riordan(n, lam)
        for n in range(1, max_n + 1) for lam in IDENTITY_ARGUMENTS
    ])
    run('binomial_transform', [
        combinatorics.check_binomial_transform(n, q)
        for n in range(1, min(max_n, 12) + 1) for q in range(0, min(max_n, 12) + 1)
    ])

    alternating = []
    for m in range(1, max_n + 6):
        try:
            combinatorics.alternating_sum_2assoc(m)
            alternating.append({'success': True, 'identity': 'alternating_sum_2assoc', 'error': ''})
        except IdentityFailure as e:
            alternating.append({'success': False, 'identity': 'alternating_sum_2assoc', 'error': str(e)})
    run('alternating_sum_2assoc', alternating)

    run('euler_d_2assoc', [
        combinatorics.check_euler_d_2assoc(n, w)
        for n in range(1, max_n + 1) for w in (Fraction(2, 3), Fraction(5, 2))
    ])
    with guarded(max_n):
        omega0 = omega_constant()
        numeric = [combinatorics.check_euler_d_2assoc(n, omega0, tol=mpmath.mpf('1e-12'))
                   for n in range(1, max_n + 1)]
    run('euler_d_2assoc_omega0', numeric)
    return suites


def _fmt(value, digits: int = 10) -> str:
    return mpmath.nstr(value, digits)


def generate_report_pdf(output_path, max_n: int = DEFAULT_MAX_N) -> Path:
    """Write the constants, branch -1 and identity tables to one PDF."""
    if not REPORTLAB_AVAILABLE:
        raise ImportError("reportlab is required for PDF generation. Install with: pip install reportlab")

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    doc = SimpleDocTemplate(
        str(output_path),
        pagesize=letter,
        rightMargin=0.75*inch,
        leftMargin=0.75*inch,
        topMargin=0.5*inch,
        bottomMargin=0.5*inch
    )

    styles = getSampleStyleSheet()
    styles.add(ParagraphStyle(
        'ReportTitle',
        parent=styles['Heading1'],
        fontSize=20,
        spaceAfter=6,
        textColor=colors.HexColor('#1a1a1a')
    ))
    styles.add(ParagraphStyle(
        'SectionHeader',
        parent=styles['Heading2'],
        fontSize=12,
        spaceBefore=12,
        spaceAfter=6,
        textColor=colors.HexColor('#333333')
    ))
    styles.add(ParagraphStyle(
        'Footer',
        parent=styles['Normal'],
        fontSize=8,
        textColor=colors.HexColor('#999999')
    ))

    table_style = [
        ('BACKGROUND', (0, 0), (-1, 0), colors.HexColor('#f5f5f5')),
        ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
        ('FONTSIZE', (0, 0), (-1, -1), 9),
        ('BOTTOMPADDING', (0, 0), (-1, -1), 3),
        ('TOPPADDING', (0, 0), (-1, -1), 3),
        ('LINEBELOW', (0, 0), (-1, 0), 1, colors.HexColor('#dddddd')),
        ('LINEBELOW', (0, -1), (-1, -1), 1, colors.HexColor('#dddddd')),
        ('ALIGN', (1, 0), (-1, -1), 'RIGHT'),
    ]

    elements = [Paragraph('Lambert W series report', styles['ReportTitle'])]

    elements.append(Paragraph('Constants', styles['SectionHeader']))
    data = [['Constant', 'Value', 'Residual']]
    for row in constants_rows():
        data.append([row['name'], _fmt(row['value'], 12), _fmt(row['residual'], 3)])
    constants_table = Table(data, colWidths=[2*inch, 2.5*inch, 1.5*inch])
    constants_table.setStyle(TableStyle(table_style))
    elements.append(constants_table)
    elements.append(Spacer(1, 0.15*inch))

    elements.append(Paragraph('Branch -1 approximants', styles['SectionHeader']))
    data = [['z', 'W_-1(z)', 'transformed', 'untransformed']]
    for row in branch_table_rows():
        data.append([row['z'], _fmt(row['oracle'], 5), _fmt(row['transformed'], 5),
                     _fmt(row['untransformed'], 5)])
    branch_table = Table(data, colWidths=[0.8*inch, 1.4*inch, 1.4*inch, 2.4*inch])
    branch_table.setStyle(TableStyle(table_style))
    elements.append(branch_table)
    elements.append(Spacer(1, 0.15*inch))

    elements.append(Paragraph(f'Identities (n up to {max_n})', styles['SectionHeader']))
    data = [['Suite', 'Checked', 'Passed', 'Status']]
    failed_rows = []
    for i, row in enumerate(identity_matrix(max_n), start=1):
        data.append([row['suite'], str(row['checked']), str(row['passed']), 'pass' if row['success'] else 'FAIL'])
        if not row['success']:
            failed_rows.append(i)
    identity_table = Table(data, colWidths=[2.5*inch, 1*inch, 1*inch, 1*inch])
    style = list(table_style)
    for i in failed_rows:
        style.append(('TEXTCOLOR', (3, i), (3, i), colors.HexColor('#b00020')))
    identity_table.setStyle(TableStyle(style))
    elements.append(identity_table)
    elements.append(Spacer(1, 0.25*inch))

    elements.append(Paragraph(
        f"Generated {datetime.now().strftime('%Y-%m-%d %H:%M')} at {mpmath.mp.prec} bits",
        styles['Footer']
    ))

    doc.build(elements)
    return output_path
