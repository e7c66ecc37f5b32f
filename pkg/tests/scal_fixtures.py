"""Twisted scalar-product tables for d = 1, 2, 3.

Each row maps a label X to a string of digits k, one per column label Y
in *_LABELS order; the product <f_X, tau f_Y> equals -1 + k*a with
a = 3, 2, 3/2 for d = 1, 2, 3.  The d = 1 and d = 2 tables are subtables
of the d = 3 table, as printed.
"""

D1_LABELS = ['0', '1', '10']
D1_K = {
    '0': '001',
    '1': '100',
    '10': '010',
}

D2_LABELS = ['0', '1', '2', '10', '20', '21', '2(10)', '(21)0']
D2_K = {
    '0': '00011011',
    '1': '10001101',
    '2': '11010001',
    '10': '01000111',
    '20': '01110010',
    '21': '10111000',
    '2(10)': '11100100',
    '(21)0': '00101110',
}

D3_LABELS = ['0', '1', '2', '3', '10', '20', '21', '30', '31', '32', '2(10)', '3(10)', '3(20)', '(21)0', '3(21)', '(31)0', '(32)0', '(32)1', '(32)(10)', '3(2(10))', '3((21)0)', '(32)((21)0)', '(3(21))0', '(3(21))(10)', '((32)1)0', '(3(2(10)))0', '3(((32)1)0)']
D3_K = {
    '0': '000011010011110110101111121',
    '1': '100001111000011111001121111',
    '2': '110010011101010211100011111',
    '3': '111011100010010111100111210',
    '10': '010000101011010101111112111',
    '20': '011010000111100111210101111',
    '21': '101011010100101121100110111',
    '30': '011111100021110000111101110',
    '31': '101112110010111010001110110',
    '32': '110111111011020100001011110',
    '2(10)': '111000101100001112110111101',
    '3(10)': '111101201010011001011111100',
    '3(20)': '121110101111010101110001100',
    '(21)0': '001001100010101011111211111',
    '3(21)': '111121010111110110100000110',
    '(31)0': '000101111011111000012111011',
    '(32)0': '010110011112110100111001011',
    '(32)1': '100111021101111110001010011',
    '(32)(10)': '110100112101011101011011001',
    '3(2(10))': '211111111100011111000010100',
    '3((21)0)': '112111100110101011110100100',
    '(32)((21)0)': '111110011201101111110000001',
    '(3(21))0': '001111010111201010111100011',
    '(3(21))(10)': '101101111100102011011110001',
    '((32)1)0': '000000011101101111111111012',
    '(3(2(10)))0': '011100101111101001121101001',
    '3(((32)1)0)': '111211111111111000011000000',
}


# Every distinct edge label appearing in the printed d = 4 example puzzles.
D4_PUZZLE_LABELS = [
    '0', '1', '2', '3', '4', '10', '20', '21', '30', '31', '32', '40', '41',
    '43', '(21)0', '(31)0', '(32)0', '(32)1', '(41)0', '(43)1', '(43)2',
    '2(10)', '3(10)', '3(20)', '3(21)', '4(21)', '4(31)', '4(32)',
    '((32)1)0', '((43)2)1', '(32)(10)', '3(2(10))', '4((31)0)', '4((32)0)',
    '4((32)1)', '4(3(10))', '4(3(20))', '4(3(21))', '((43)2)(10)',
    '(((43)2)1)0', '(4((32)1))0', '4(3(2(10)))',
]
