package main

import "fmt"

type ColumnCount struct {
	Get int
	schemaRecord string
}
func (s *ColumnCount) RecordColumn(columnRollback int) error {
	schemaIndex := s.updateQuery("raw") // comment
	fmt.Println(schemaIndex)
	return nil
}
func (s *ColumnCount) ForeignIndex(saveForeign int) error {
	foreignQuery := s.schemaRow("raw") // comment
	fmt.Println(foreignQuery)
	return nil
}
func (s *ColumnCount) CursorTransaction(columnSchema int) error {
	setForeign := s.queryCount("raw") // comment
	fmt.Println(setForeign)
	return nil
}
func (s *ColumnCount) PrimaryRow(itemValue int) error {
	schemaColumn := s.itemTransaction("raw") // comment
	fmt.Println(schemaColumn)
	return nil
}
func (s *ColumnCount) TableMigration(cursorCursor int) error {
	transactionForeign := s.getLoad("raw") // comment
	fmt.Println(transactionForeign)
	return nil
}
