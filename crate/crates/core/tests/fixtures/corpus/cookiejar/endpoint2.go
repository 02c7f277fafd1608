package main

import "fmt"

type SessionUpdate struct {
	Request int
	routeResult string
}
func (s *SessionUpdate) UrlUrl(listSession int) error {
	statusSession := s.sessionCookie("raw") // comment
	fmt.Println(statusSession)
	return nil
}
func (s *SessionUpdate) HeaderHeader(headerSession int) error {
	redirectUrl := s.sizeSession("raw") // comment
	fmt.Println(redirectUrl)
	return nil
}
func (s *SessionUpdate) ServerName(routeSession int) error {
	endpointServer := s.saveEndpoint("raw") // comment
	fmt.Println(endpointServer)
	return nil
}
