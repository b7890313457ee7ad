"""Residue alphabet and token ids shared by ingest, model and CLI."""

AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"
UNK = "X"

AA_TO_INDEX = {aa: i for i, aa in enumerate(AMINO_ACIDS)}

UNK_INDEX = 20
MASK_INDEX = 21
PAD_INDEX = 22
N_VOCAB = 23

THREE_TO_ONE = {
    "ALA": "A", "CYS": "C", "ASP": "D", "GLU": "E", "PHE": "F",
    "GLY": "G", "HIS": "H", "ILE": "I", "LYS": "K", "LEU": "L",
    "MET": "M", "ASN": "N", "PRO": "P", "GLN": "Q", "ARG": "R",
    "SER": "S", "THR": "T", "VAL": "V", "TRP": "W", "TYR": "Y",
}
ONE_TO_THREE = {one: three for three, one in THREE_TO_ONE.items()}
ONE_TO_THREE[UNK] = "UNK"


def sequence_to_ids(sequence: str) -> list[int]:
    """Map a one-letter residue string to token ids (unknowns to UNK)."""
    return [AA_TO_INDEX.get(aa, UNK_INDEX) for aa in sequence]


def ids_to_sequence(ids) -> str:
    """Map token ids back to a one-letter string; non-residue ids become UNK."""
    return "".join(AMINO_ACIDS[i] if 0 <= i < 20 else UNK for i in ids)
