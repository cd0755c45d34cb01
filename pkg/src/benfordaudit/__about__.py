NAME = "benfordaudit"
VERSION = "0.1.0"
